pub mod cp;
pub mod doa;
