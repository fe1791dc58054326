pub mod alist;
pub mod cli;
pub mod component;
pub mod construct;
pub mod de;
pub mod ensemble;
pub mod error;
pub mod exit;
pub mod gf2;
pub mod growth;
pub mod sim;

pub use error::{Error, Result};
