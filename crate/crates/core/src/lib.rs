pub mod arith;
pub mod elliptic;
pub mod progression;
pub mod analytic;
