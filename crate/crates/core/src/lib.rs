pub mod acceptance;
pub mod coeff;
pub mod config;
pub mod error;
pub mod flag;
pub mod gkm;
pub mod hall;
mod fq;
pub mod quiver;
pub mod render;
pub mod ring;
