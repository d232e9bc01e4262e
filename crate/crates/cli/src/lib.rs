//! Library half of the `bourbaki` binary: instance loading, the command
//! runners, and the certificate format. `main.rs` only parses arguments.

pub mod certificate;
pub mod commands;
pub mod instance;

use bourbaki_core::constructions::ConstructionError;
use bourbaki_core::equivalence::EquivalenceError;
use thiserror::Error;

pub use certificate::Certificate;
pub use commands::{run, Job, Options, OracleJob, Via};
pub use instance::InstanceFile;

#[derive(Debug, Error)]
pub enum CliError {
    /// Input that does not parse or validate: exit code 2.
    #[error("{0}")]
    Malformed(String),
    /// A theorem hypothesis that the instance does not meet: exit code 1.
    #[error("{0}")]
    Unmet(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unmet(_) => 1,
            CliError::Malformed(_) | CliError::Io { .. } => 2,
        }
    }
}

/// `Variant(fields): message`, so the offending element or pair is named
/// both structurally and in words.
fn describe<E: std::fmt::Debug + std::fmt::Display>(e: &E) -> String {
    let mut tag = format!("{e:?}");
    for wrapper in ["Construction(", "Order(", "Engine("] {
        if tag.starts_with(wrapper) && tag.ends_with(')') {
            tag = tag[wrapper.len()..tag.len() - 1].to_string();
        }
    }
    if let Some(i) = tag.find(" {") {
        tag.truncate(i);
    }
    format!("{tag}: {e}")
}

pub(crate) fn classify(e: ConstructionError) -> CliError {
    use ConstructionError::*;
    let msg = describe(&e);
    match e {
        HypothesisFailed { .. } | NotInflationary(_) | NotUnionClosed(_) => CliError::Unmet(msg),
        _ => CliError::Malformed(msg),
    }
}

pub(crate) fn classify_equivalence(e: EquivalenceError) -> CliError {
    match e {
        EquivalenceError::Construction(inner) => classify(inner),
        EquivalenceError::NotInductive(_)
        | EquivalenceError::NotMaximal(_)
        | EquivalenceError::NotCovering(..)
        | EquivalenceError::MergeNotUpperBound(_)
        | EquivalenceError::StageFailed { .. } => CliError::Unmet(describe(&e)),
        _ => CliError::Malformed(describe(&e)),
    }
}

pub(crate) fn malformed<E: std::fmt::Debug + std::fmt::Display>(e: E) -> CliError {
    CliError::Malformed(describe(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bourbaki_core::OrderError;

    #[test]
    fn descriptions_name_the_witness() {
        let e = malformed(OrderError::NotTransitive(0, 1, 2));
        assert!(e.to_string().starts_with("NotTransitive(0, 1, 2): "), "{e}");
        assert_eq!(e.exit_code(), 2);
        let e = malformed(OrderError::CarrierTooLarge { n: 9, bound: 4 });
        assert!(e.to_string().starts_with("CarrierTooLarge: "), "{e}");
        let e = classify(ConstructionError::NotInflationary(3));
        assert_eq!(e.exit_code(), 1);
    }
}
