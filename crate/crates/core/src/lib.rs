pub mod analysis;
pub mod base;
pub mod cli;
pub mod enumerate;
pub mod eval;
pub mod ground;
pub mod logic;
pub mod report;
