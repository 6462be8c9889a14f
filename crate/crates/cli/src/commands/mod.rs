pub mod eigen;
pub mod evolve;
pub mod fixture;
pub mod gauge;
pub mod rag;
pub mod relax;
pub mod units;
