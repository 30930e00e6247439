//! Input files, reports and the commands behind the binary.
pub mod certificate;
pub mod format;
pub mod report;
pub mod spec;

pub use certificate::{certificate_from_block, certificate_to_block};
pub use format::{parse_blocks, Block, FormatError};
pub use report::{execute, input_digest, run, Classification, Command, ExitStatus, Failure, Format, MetricRow, Options, Report};
pub use spec::{parse_spec, SpecError, SpecFile};
