//! Line-oriented nested key-value format used for reports.
//!
//! ```text
//! name {
//!   key = value
//!   child {
//!     key = value
//!   }
//! }
//! ```
//!
//! Keys may repeat. Values run to the end of the line and are trimmed.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Block {
    pub name: String,
    pub entries: Vec<(String, String)>,
    pub children: Vec<Block>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {0}: expected `key = value`, `name {{` or `}}`")]
    Syntax(usize),
    #[error("line {0}: unmatched `}}`")]
    Unmatched(usize),
    #[error("unterminated block {0}")]
    Unterminated(String),
    #[error("block {block}: missing key {key}")]
    MissingKey { block: String, key: String },
    #[error("block {block}: bad value for {key}: {value}")]
    BadValue { block: String, key: String, value: String },
    #[error("expected block {expected}, found {found}")]
    WrongBlock { expected: String, found: String },
}

impl Block {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn entry(mut self, key: &str, value: impl ToString) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn child(mut self, b: Block) -> Self {
        self.children.push(b);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn all(&self, key: &str) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    pub fn require(&self, key: &str) -> Result<&str, FormatError> {
        self.get(key).ok_or_else(|| FormatError::MissingKey {
            block: self.name.clone(),
            key: key.to_string(),
        })
    }

    pub fn parse_value<T: std::str::FromStr>(&self, key: &str) -> Result<T, FormatError> {
        let v = self.require(key)?;
        v.parse().map_err(|_| FormatError::BadValue {
            block: self.name.clone(),
            key: key.to_string(),
            value: v.to_string(),
        })
    }

    pub fn children_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Block> + 'a {
        self.children.iter().filter(move |c| c.name == name)
    }

    pub fn find(&self, name: &str) -> Option<&Block> {
        self.children.iter().find(|c| c.name == name)
    }

    pub fn expect_name(&self, name: &str) -> Result<(), FormatError> {
        if self.name == name {
            Ok(())
        } else {
            Err(FormatError::WrongBlock {
                expected: name.to_string(),
                found: self.name.clone(),
            })
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let _ = writeln!(out, "{pad}{} {{", self.name);
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{pad}  {k} = {v}");
        }
        for c in &self.children {
            c.render_into(out, depth + 1);
        }
        let _ = writeln!(out, "{pad}}}");
    }

    /// Aligned `key  value` table with one heading per block.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.text_into(&mut out, 0);
        out
    }

    fn text_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let _ = writeln!(out, "{pad}[{}]", self.name);
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{pad}  {k:<width$}  {v}");
        }
        for c in &self.children {
            c.text_into(out, depth + 1);
        }
    }
}

/// Parses a sequence of top-level blocks.
pub fn parse_blocks(text: &str) -> Result<Vec<Block>, FormatError> {
    let mut stack: Vec<Block> = Vec::new();
    let mut top = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        if line == "}" {
            let done = stack.pop().ok_or(FormatError::Unmatched(lineno))?;
            match stack.last_mut() {
                Some(parent) => parent.children.push(done),
                None => top.push(done),
            }
        } else if let Some((k, v)) = line.split_once('=') {
            let parent = stack.last_mut().ok_or(FormatError::Syntax(lineno))?;
            let k = k.trim();
            if k.is_empty() || k.contains(char::is_whitespace) {
                return Err(FormatError::Syntax(lineno));
            }
            parent.push(k, v.trim());
        } else if let Some(name) = line.strip_suffix('{') {
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(FormatError::Syntax(lineno));
            }
            stack.push(Block::new(name));
        } else {
            return Err(FormatError::Syntax(lineno));
        }
    }
    if let Some(open) = stack.pop() {
        return Err(FormatError::Unterminated(open.name));
    }
    Ok(top)
}
