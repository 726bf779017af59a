pub mod campaign;
pub mod cli;
pub mod environment;
pub mod gen;
pub mod geodesic;
pub mod geom;
pub mod planner;
pub mod service;
pub mod sim;
pub mod strategy;
