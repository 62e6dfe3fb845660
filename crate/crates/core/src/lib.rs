//! Exact group-theoretic machinery for triple-product-property constructions.

pub mod field;
pub mod group;
pub mod tpp;
pub mod embed;
pub mod chardeg;
pub mod bounds;
pub mod constructions;
pub mod search;
pub mod report;
