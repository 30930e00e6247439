//! Filtered graph maps representing polynomially growing automorphisms.

mod collapse;
mod degrees;
mod graph;
mod representative;
mod transition;

pub use collapse::collapse_free_faces;
pub use degrees::{edge_growth_degrees, orbit_samples, GrowthTable, DEFAULT_HORIZON};
pub use graph::{EdgePath, GraphEdge, MarkedGraph, Marking};
pub use representative::{verify_representative, FilteredRepresentative, GraphMap};
pub use transition::{spectral_radius, transition_analysis, TransitionMatrix, SPECTRAL_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrackError {
    #[error("edge {0} has an endpoint that is not a vertex")]
    UnknownVertex(String),
    #[error("path is not edge-connected at {0}")]
    Incidence(String),
    #[error("filtration order is not a permutation of the edges")]
    BadOrder,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is simply connected")]
    SimplyConnected,
    #[error("image of {edge} does not begin with {edge}")]
    MissingPrefix { edge: String },
    #[error("suffix of {edge} crosses {uses}, which is not below it")]
    SuffixUsesLaterEdge { edge: String, uses: String },
    #[error("suffix of {edge} is not a closed path at its terminal vertex")]
    SuffixNotClosed { edge: String },
    #[error("suffix of {edge} backtracks")]
    SuffixNotImmersed { edge: String },
    #[error("subgraph is not invariant: image of {edge} crosses {leaves_to}")]
    NotInvariant { edge: String, leaves_to: String },
    #[error("path is not closed")]
    NotClosed,
    #[error("path is not immersed")]
    NotImmersed,
    #[error("horizon {0} is too short to fit growth")]
    HorizonTooShort(u32),
    #[error("growth of {edge} is {class}")]
    InconclusiveEdge { edge: String, class: &'static str },
}

impl TrackError {
    /// Which condition a verification failure breaks: `A` vertices fixed
    /// and images connected, `B` levels built one edge at a time, `C` the
    /// image of each edge is the edge followed by a closed immersed path below it.
    pub fn clause(&self) -> &'static str {
        match self {
            TrackError::Incidence(_) | TrackError::UnknownVertex(_) => "A",
            TrackError::BadOrder | TrackError::Disconnected => "B",
            TrackError::MissingPrefix { .. }
            | TrackError::SuffixUsesLaterEdge { .. }
            | TrackError::SuffixNotClosed { .. }
            | TrackError::SuffixNotImmersed { .. } => "C",
            _ => "-",
        }
    }
}
