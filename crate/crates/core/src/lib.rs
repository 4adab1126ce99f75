pub mod algebra;
pub mod cli;
pub mod coeff;
pub mod gf;
pub mod variety;
pub mod zetafn;
pub mod zetael;

mod fp_poly;
