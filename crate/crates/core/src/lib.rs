pub mod amalgam;
pub mod cli;
pub mod format;
pub mod gamma;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod variety;
