use sha2::{Digest, Sha256};

use crate::cayley::{divergence_chi, Budget, CayleyError, DivergenceSample, MappingTorus};
use crate::thickness::{certify_thickness, mapping_torus_presentation, ThicknessCertificate};
use crate::train_track::{transition_analysis, verify_representative, DEFAULT_HORIZON};
use crate::word::{classify_growth, growth_function, Certification, Endomorphism, GrowthClass};

use super::certificate::certificate_to_block;
use super::format::Block;
use super::spec::{parse_spec, SpecError, SpecFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Growth,
    Certify,
    Divergence,
}

impl Command {
    pub fn label(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Growth => "growth",
            Command::Certify => "certify",
            Command::Divergence => "divergence",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        [Command::Analyze, Command::Growth, Command::Certify, Command::Divergence]
            .into_iter()
            .find(|c| c.label() == s)
    }

    fn wants_certificate(self) -> bool {
        matches!(self, Command::Analyze | Command::Certify)
    }

    fn wants_metrics(self) -> bool {
        matches!(self, Command::Analyze | Command::Divergence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[repr(i32)]
pub enum ExitStatus {
    Ok = 0,
    Parse = 1,
    Verification = 2,
    Refused = 3,
    Budget = 4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub max_n: u32,
    /// inclusive range of divergence radii
    pub radius: (u32, u32),
    pub horizon: f64,
    pub power: u32,
    pub budget: Budget,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_HORIZON,
            radius: (2, 4),
            horizon: 1.0,
            power: 1,
            budget: Budget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub class: GrowthClass,
    pub max_n: u32,
    pub samples: usize,
    pub truncated: bool,
    pub last_value: u64,
    pub slope: f64,
    pub residual: f64,
    pub tail_ratio: f64,
    pub plateau: f64,
    /// of the transition matrix of the input graph map
    pub spectral_radius: Option<f64>,
}

/// Why the run stopped short, with a stable machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: &'static str,
    pub exit: ExitStatus,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Command,
    pub warnings: Vec<String>,
    pub classification: Option<Classification>,
    pub presentation: Option<String>,
    pub certificate: Option<ThicknessCertificate>,
    pub failure: Option<Failure>,
    pub metrics: Vec<MetricRow>,
    pub provenance: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricRow {
    pub r: u32,
    pub chi: Option<u32>,
    pub avoid_radius: u32,
    pub horizon: u32,
    pub sphere: usize,
    pub y: String,
    pub z: String,
    pub path: String,
}

impl MetricRow {
    fn new(s: &DivergenceSample, torus: &MappingTorus, t: &str) -> Self {
        let b = torus.basis();
        Self {
            r: s.r,
            chi: s.chi.value(),
            avoid_radius: s.avoid_radius,
            horizon: s.horizon,
            sphere: s.sphere_size,
            y: s.witness.y.format(b, t),
            z: s.witness.z.format(b, t),
            path: s
                .witness
                .path
                .iter()
                .map(|g| g.format(b, t))
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

/// Parse failures are the only errors; everything later lands in the report.
pub fn run(command: Command, text: &str, opts: &Options) -> Result<Report, SpecError> {
    let spec = parse_spec(text)?;
    Ok(execute(command, &spec, &input_digest(text), opts))
}

/// Hex SHA-256 of the input text, recorded in the provenance block.
pub fn input_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn fail(code: &'static str, exit: ExitStatus, message: impl Into<String>) -> Option<Failure> {
    Some(Failure {
        code,
        exit,
        message: message.into(),
    })
}

pub fn execute(command: Command, spec: &SpecFile, input_hash: &str, opts: &Options) -> Report {
    let mut report = Report {
        command,
        warnings: spec.warnings.clone(),
        classification: None,
        presentation: None,
        certificate: None,
        failure: None,
        metrics: Vec::new(),
        provenance: provenance(command, input_hash, opts),
    };
    let phi = match automorphism(spec) {
        Ok(phi) => phi,
        Err(f) => {
            report.failure = Some(f);
            return report;
        }
    };
    if command != Command::Divergence {
        match classify(spec, &phi, opts) {
            Ok(c) => report.classification = Some(c),
            Err(f) => report.failure = Some(f),
        }
    }
    if command.wants_certificate() && report.failure.is_none() {
        report.presentation = mapping_torus_presentation(&phi).ok().map(|p| p.render());
        match certify(spec, report.classification.as_ref().expect("classified"), opts) {
            Ok(c) => {
                if !network_complete(&c) {
                    report.failure = fail(
                        "incomplete-network",
                        ExitStatus::Verification,
                        "no chain of shared elements links every network member",
                    );
                }
                report.certificate = Some(c);
            }
            Err(f) => report.failure = Some(f),
        }
    }
    if command.wants_metrics() && report.failure.as_ref().is_none_or(|f| f.exit == ExitStatus::Refused) {
        match metrics(&phi, opts) {
            Ok(rows) => report.metrics = rows,
            Err(f) => report.failure = Some(f),
        }
    }
    report
}

fn network_complete(c: &ThicknessCertificate) -> bool {
    c.network().is_none_or(|n| n.connected) && c.children().iter().all(network_complete)
}

fn automorphism(spec: &SpecFile) -> Result<Endomorphism, Failure> {
    let phi = spec.automorphism().map_err(|e| Failure {
        code: "invalid-representative",
        exit: ExitStatus::Verification,
        message: e.to_string(),
    })?;
    let phi = phi.certified();
    if let Certification::NotAutomorphism { missing } = phi.certification() {
        return Err(Failure {
            code: "not-automorphism",
            exit: ExitStatus::Verification,
            message: format!("{} is not in the image", phi.basis().name(*missing)),
        });
    }
    // a declared inverse only applies to rose inputs, where it is in the same basis
    if let (Some(inv), None) = (&spec.inverse, &spec.graph) {
        return phi.with_declared_inverse(inv.clone()).map_err(|g| Failure {
            code: "inverse-mismatch",
            exit: ExitStatus::Verification,
            message: format!("declared inverse fails on {}", spec.basis.name(g)),
        });
    }
    Ok(phi)
}

fn classify(spec: &SpecFile, phi: &Endomorphism, opts: &Options) -> Result<Classification, Failure> {
    let refuse = |e: String| Failure {
        code: "inconclusive-growth",
        exit: ExitStatus::Refused,
        message: e,
    };
    let samples = growth_function(phi, opts.max_n, opts.budget.word_cap).map_err(|e| refuse(e.to_string()))?;
    let profile = classify_growth(&samples).map_err(|e| refuse(e.to_string()))?;
    let spectral_radius = spec.graph_map().ok().map(|g| transition_analysis(&g).spectral_radius);
    Ok(Classification {
        class: profile.class,
        max_n: opts.max_n,
        samples: samples.values.len(),
        truncated: samples.truncated,
        last_value: samples.values.last().map_or(0, |v| v.1),
        slope: profile.slope,
        residual: profile.residual,
        tail_ratio: profile.tail_ratio,
        plateau: profile.plateau,
        spectral_radius,
    })
}

fn certify(spec: &SpecFile, class: &Classification, opts: &Options) -> Result<ThicknessCertificate, Failure> {
    let eta = match class.class {
        GrowthClass::Polynomial(d) => d,
        GrowthClass::Exponential => {
            return Err(Failure {
                code: "exponential-growth",
                exit: ExitStatus::Refused,
                message: "exponential growth: the group is relatively hyperbolic, not thick".into(),
            })
        }
        GrowthClass::Inconclusive => {
            return Err(Failure {
                code: "inconclusive-growth",
                exit: ExitStatus::Refused,
                message: format!("growth could not be classified within {} iterations", opts.max_n),
            })
        }
    };
    let verification = |code: &'static str, message: String| Failure {
        code,
        exit: ExitStatus::Verification,
        message,
    };
    let map = spec
        .graph_map()
        .map_err(|e| verification("invalid-representative", e.to_string()))?;
    let f = verify_representative(map).map_err(|e| {
        verification(
            "invalid-representative",
            format!("condition {} fails: {e}", e.clause()),
        )
    })?;
    let cert = certify_thickness(&f, opts.max_n, opts.power)
        .map_err(|e| verification("certification-failed", e.to_string()))?;
    if cert.eta != eta {
        return Err(verification(
            "degree-mismatch",
            format!("edge degrees give {} but the automorphism grows with degree {eta}", cert.eta),
        ));
    }
    Ok(cert)
}

fn metrics(phi: &Endomorphism, opts: &Options) -> Result<Vec<MetricRow>, Failure> {
    let torus = MappingTorus::with_word_cap(phi.clone(), opts.budget.word_cap);
    let t = crate::thickness::stable_letter(phi.basis());
    let (lo, hi) = opts.radius;
    (lo..=hi)
        .map(|r| {
            divergence_chi(&torus, r, opts.horizon, &opts.budget)
                .map(|s| MetricRow::new(&s, &torus, &t))
                .map_err(|e| match e {
                    CayleyError::BallBudget { .. } | CayleyError::WordCap { .. } => Failure {
                        code: "budget-exceeded",
                        exit: ExitStatus::Budget,
                        message: e.to_string(),
                    },
                    other => Failure {
                        code: "divergence-failed",
                        exit: ExitStatus::Verification,
                        message: other.to_string(),
                    },
                })
        })
        .collect()
}

fn provenance(command: Command, hash: &str, opts: &Options) -> Vec<(String, String)> {
    [
        ("tool", format!("mtorus {}", env!("CARGO_PKG_VERSION"))),
        ("command", command.label().to_string()),
        ("input_sha256", hash.to_string()),
        ("max_n", opts.max_n.to_string()),
        ("radius", format!("{}..{}", opts.radius.0, opts.radius.1)),
        ("horizon", format!("{}", opts.horizon)),
        ("power", opts.power.to_string()),
        ("ball_budget", opts.budget.ball.to_string()),
        ("word_cap", opts.budget.word_cap.to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

impl Report {
    pub fn exit_status(&self) -> ExitStatus {
        self.failure.as_ref().map_or(ExitStatus::Ok, |f| f.exit)
    }

    pub fn to_blocks(&self) -> Vec<Block> {
        let mut out = Vec::new();
        if !self.warnings.is_empty() {
            let mut w = Block::new("warnings");
            for m in &self.warnings {
                w.push("warning", m);
            }
            out.push(w);
        }
        if let Some(c) = &self.classification {
            let mut b = Block::new("classification")
                .entry("growth", c.class.label())
                .entry("eta", c.class.degree().map_or("none".to_string(), |d| d.to_string()))
                .entry("max_n", c.max_n)
                .entry("samples", c.samples)
                .entry("truncated", c.truncated)
                .entry("gr_last", c.last_value)
                .entry("slope", format!("{:.6}", c.slope))
                .entry("residual", format!("{:.6}", c.residual))
                .entry("tail_ratio", format!("{:.6}", c.tail_ratio))
                .entry("plateau", format!("{:.6}", c.plateau));
            if let Some(rho) = c.spectral_radius {
                b.push("spectral_radius", format!("{rho:.6}"));
            }
            out.push(b);
        }
        if let Some(p) = &self.presentation {
            out.push(Block::new("presentation").entry("relators", p));
        }
        if let Some(c) = &self.certificate {
            out.push(certificate_to_block(c));
        }
        if let Some(f) = &self.failure {
            let name = if f.exit == ExitStatus::Refused { "refusal" } else { "failure" };
            out.push(
                Block::new(name)
                    .entry("code", f.code)
                    .entry("exit", f.exit as i32)
                    .entry("reason", &f.message),
            );
        }
        if !self.metrics.is_empty() {
            let mut m = Block::new("metrics")
                .entry("statistic", "chi")
                .entry("center", "identity")
                .entry("avoids", "open ball of radius floor(r/2)")
                .entry("scale", "finite samples, not an asymptotic exponent");
            for row in &self.metrics {
                m.children.push(
                    Block::new("sample")
                        .entry("r", row.r)
                        .entry("chi", row.chi.map_or("disconnected".to_string(), |c| c.to_string()))
                        .entry("avoid_radius", row.avoid_radius)
                        .entry("horizon", row.horizon)
                        .entry("sphere", row.sphere)
                        .entry("y", &row.y)
                        .entry("z", &row.z)
                        .entry("path", &row.path),
                );
            }
            out.push(m);
        }
        let mut p = Block::new("provenance");
        for (k, v) in &self.provenance {
            p.push(k, v);
        }
        out.push(p);
        out
    }

    pub fn render(&self, format: Format) -> String {
        self.to_blocks()
            .iter()
            .map(|b| match format {
                Format::Structured => b.render(),
                Format::Text => b.render_text(),
            })
            .collect::<Vec<_>>()
            .join(match format {
                Format::Structured => "",
                Format::Text => "\n",
            })
    }
}
