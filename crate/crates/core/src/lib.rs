pub mod algebra;
pub mod basecurve;
pub mod certify;
pub mod cli;
pub mod expr;
pub mod jensen;
