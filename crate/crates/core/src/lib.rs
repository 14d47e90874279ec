//! Exact classification of the fusions of the tensor square (and the wreath
//! products) of a symmetric rank-3 association scheme.

pub mod arith;
pub mod partition;
pub mod scheme;
pub mod product;
pub mod fusion;
pub mod oracle;
pub mod classify;
pub mod report;
