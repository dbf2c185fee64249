pub mod attack;
pub mod density;
pub mod experiment;
pub mod lattice;
pub mod oracle;
