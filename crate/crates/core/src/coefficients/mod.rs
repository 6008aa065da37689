//! Ground fields, truncated local rings, cone completions and Novikov series.

pub mod cone;
pub mod novikov;
pub mod poly;
pub mod ring;

pub use cone::{cone_completion, is_strongly_convex, ConeMonoid};
pub use novikov::{lambda_point_specialize, large_volume_specialize, LambdaPoint, NovikovElement};
pub use poly::{parse_polynomial, Monomial, RawPolynomial};
pub use ring::{make_local_ring, LocalRing, RingMap, SeriesElement, Variable};
