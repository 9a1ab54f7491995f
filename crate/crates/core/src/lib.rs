pub mod clockspace;
pub mod model;
pub mod pipeline;
pub mod semantics;
pub mod fixtures;
pub mod exec;
pub mod game;
