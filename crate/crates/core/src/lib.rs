pub mod board;
pub mod cfg;
pub mod energy;
pub mod replay;
pub mod sgf;
pub mod tactics;
