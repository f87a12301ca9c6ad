pub mod anomaly;
pub mod dl;
pub mod features;
pub mod ingest;
pub mod ml;
pub mod selftest;
pub mod ssl;
