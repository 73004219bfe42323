pub mod canon;
pub mod error;
pub mod graph;
pub mod exactla;
pub mod enumerate;
pub mod vector;
pub mod relations;
pub mod engine;
pub mod hopf;
