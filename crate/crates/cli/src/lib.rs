//! Report types and the claim registry behind the `sunrise` binary.

pub mod report;
pub mod reproduce;
