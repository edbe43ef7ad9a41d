//! Test-only support for airmag: independent oracles, random generators and
//! hand-authored fixtures. Nothing here depends on `airmag-core`, so the
//! oracles cannot share code paths with the implementation they check.

pub mod fixtures;
pub mod gen;
pub mod oracle;
