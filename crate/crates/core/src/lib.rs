pub mod bounds;
pub mod codes;
pub mod field;
pub mod precode;
pub mod rng;
pub mod secrecy;
pub mod sim;
