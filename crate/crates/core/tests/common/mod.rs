#![allow(dead_code)]

pub mod game_check;
pub mod instances;
pub mod laws;
pub mod region_oracle;
pub mod suite;
