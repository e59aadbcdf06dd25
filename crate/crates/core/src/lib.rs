pub mod coarse;
pub mod group;
pub mod free;
pub mod report;
pub mod ideal;
pub mod harness;
