pub mod electric;
pub mod magnetic;
pub mod radial;
pub mod polarizability;
