pub mod channel;
pub mod error;
pub mod quadrature;
pub mod specfun;
pub mod secrecy;
pub mod oracle;
pub mod monte_carlo;
pub mod sweep;
pub mod selftest;
