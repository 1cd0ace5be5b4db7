//! Capped-precision `p`-adic arithmetic and the machinery built on it:
//! truncated power series, Newton/Hensel solving, short Weierstrass curves,
//! the Tate family, and the degenerating family whose torsion parameters
//! accumulate at its nodal fiber.

pub mod elliptic;
pub mod error;
pub mod family;
pub mod hensel;
pub mod padic;
pub mod poly;
pub mod series;
pub mod tate;

pub use error::{Error, Result};
pub use padic::Padic;
