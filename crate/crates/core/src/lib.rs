pub mod bench;
pub mod cli;
pub mod data;
pub mod distance;
pub mod error;
pub mod forest;
pub mod model;
pub mod nn;
pub mod splitter;
pub mod synthetic;
pub mod transform;
pub mod tree;

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
mod test_oracle;
