//! Exact machinery for difference sets avoiding multivariate polynomial
//! images: polynomial classification (intersective, Deligne, strongly
//! Deligne, rank), auxiliary polynomials from p-adic root data, the gradient
//! sieve, sieved exponential sums with explicit bound verification, and the
//! difference-set threshold `D(X, N)` at desk scale.
//!
//! ```
//! use intersieve::classify::{deligne_certify, Status};
//! use intersieve::diffset::{generate_image, solve_exact};
//! use intersieve::parse_polynomial;
//!
//! let h = parse_polynomial("x^2 + y^2", None)?;
//! assert_eq!(deligne_certify(&h, 1_000_000).status, Status::Certified);
//!
//! // Largest A in [1, 20] whose differences avoid sums of two squares.
//! let forbidden = generate_image(&h, &[(0, 5), (0, 5)], 20, 10_000)?;
//! let result = solve_exact(&forbidden, 20, 1_000_000)?;
//! assert_eq!(result.size, 3);
//! assert_eq!(result.witness, vec![1, 4, 7]);
//! # Ok::<(), intersieve::Error>(())
//! ```

pub mod classify;
pub mod diffset;
pub mod error;
pub mod expsum;
pub mod padic;
pub mod parse;
pub mod poly;
pub mod report;
pub mod resultant;
pub mod scan;
pub mod sieve;

pub use error::{Error, Result};
pub use parse::parse_polynomial;
pub use poly::{IntPolynomial, LinearMap, ModPolynomial, MultiIndex};
