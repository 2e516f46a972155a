//! Library surface of the `repotopics` binary, exposed so integration
//! tests can drive the stages in-process.

pub mod run;
