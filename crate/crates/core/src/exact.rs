//! Exact rationals, the orientation predicate, shearing and duality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
pub use ote_decoder::OrientationSign;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn sign(&self) -> OrientationSign {
        OrientationSign::from_ordering(self.0.cmp(&BigRational::zero()))
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for ExactRational {
    fn from(v: i64) -> Self {
        ExactRational::from_int(v)
    }
}

impl From<BigRational> for ExactRational {
    fn from(v: BigRational) -> Self {
        ExactRational(v)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $f(self, o: ExactRational) -> ExactRational {
                ExactRational(self.0.$f(o.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $f(self, o: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$f(&o.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a rational number: {0:?}")]
pub struct ParseRationalError(pub String);

impl FromStr for ExactRational {
    type Err = ParseRationalError;

    /// Accepts `p`, `p/q` and `-p/q` with decimal integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: BigInt = p.parse().map_err(|_| err())?;
        let q: BigInt = q.parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        Ok(ExactRational::new(p, q))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExactPoint {
    pub x: ExactRational,
    pub y: ExactRational,
}

impl ExactPoint {
    pub fn new(x: ExactRational, y: ExactRational) -> Self {
        ExactPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        ExactPoint { x: x.into(), y: y.into() }
    }
}

impl fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of det [[1, px, py], [1, qx, qy], [1, rx, ry]]; positive means a
/// counterclockwise turn.
pub fn orient(p: &ExactPoint, q: &ExactPoint, r: &ExactPoint) -> OrientationSign {
    let lhs = &(&q.x - &p.x) * &(&r.y - &p.y);
    let rhs = &(&q.y - &p.y) * &(&r.x - &p.x);
    OrientationSign::from_ordering(lhs.cmp(&rhs))
}

/// Applies `x' = x + eps*y` with `eps > 0` small enough that distinct points
/// get distinct `x'`.
pub fn shear_normalize(points: &[ExactPoint]) -> (Vec<ExactPoint>, ExactRational) {
    let mut xs: Vec<&ExactRational> = points.iter().map(|p| &p.x).collect();
    xs.sort();
    xs.dedup();
    let gap = xs
        .windows(2)
        .map(|w| w[1] - w[0])
        .min()
        .unwrap_or_else(ExactRational::one);
    let (ymin, ymax) = match (points.iter().map(|p| &p.y).min(), points.iter().map(|p| &p.y).max()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => (ExactRational::zero(), ExactRational::zero()),
    };
    let m = (&(&ymax - &ymin) / &gap).ceil_int() + 1;
    let mut eps = ExactRational::new(1, m);
    loop {
        let sheared: Vec<ExactPoint> = points
            .iter()
            .map(|p| ExactPoint { x: &p.x + &(&eps * &p.y), y: p.y.clone() })
            .collect();
        if distinct_images(points, &sheared) {
            return (sheared, eps);
        }
        eps = &eps / &ExactRational::from_int(2);
    }
}

fn distinct_images(orig: &[ExactPoint], sheared: &[ExactPoint]) -> bool {
    let mut idx: Vec<usize> = (0..orig.len()).collect();
    idx.sort_by(|&a, &b| sheared[a].x.cmp(&sheared[b].x));
    idx.windows(2)
        .all(|w| sheared[w[0]].x != sheared[w[1]].x || orig[w[0]] == orig[w[1]])
}

/// The dual line `y = px * x - py`, as `(slope, intercept)`.
pub fn dual_line(p: &ExactPoint) -> (ExactRational, ExactRational) {
    (p.x.clone(), -p.y.clone())
}

/// `sign(p.y - (slope * p.x + intercept))`.
pub fn side_of_line(slope: &ExactRational, intercept: &ExactRational, p: &ExactPoint) -> OrientationSign {
    let y = &(slope * &p.x) + intercept;
    OrientationSign::from_ordering(p.y.cmp(&y))
}

/// Crossing point of two non-parallel lines.
pub fn line_crossing(
    a: &(ExactRational, ExactRational),
    b: &(ExactRational, ExactRational),
) -> Option<ExactPoint> {
    let dm = &a.0 - &b.0;
    if dm.is_zero() {
        return None;
    }
    let x = &(&b.1 - &a.1) / &dm;
    let y = &(&a.0 * &x) + &a.1;
    Some(ExactPoint { x, y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(x: i64, y: i64) -> ExactPoint {
        ExactPoint::from_ints(x, y)
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &pt(0, 1)), OrientationSign::Positive);
        assert_eq!(orient(&pt(0, 0), &pt(1, 1), &pt(2, 2)), OrientationSign::Zero);
        assert_eq!(orient(&pt(0, 0), &pt(0, 1), &pt(1, 0)), OrientationSign::Negative);
    }

    #[test]
    fn rationals_are_reduced() {
        let r = ExactRational::new(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!("6/-4".parse::<ExactRational>().unwrap(), r);
        assert_eq!("-3/2".parse::<ExactRational>().unwrap(), r);
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("x".parse::<ExactRational>().is_err());
        assert_eq!(r.to_string(), "-3/2");
    }

    #[test]
    fn shear_separates_vertical_pair() {
        let pts = [pt(0, 0), pt(0, 1), pt(1, 0)];
        let (s, eps) = shear_normalize(&pts);
        assert!(eps > ExactRational::zero() && eps < ExactRational::one());
        assert_eq!(s[0].x, ExactRational::zero());
        assert_eq!(s[1].x, eps);
        assert_eq!(s[2].x, ExactRational::one());
    }

    #[test]
    fn shear_keeps_duplicates() {
        let pts = [pt(0, 0), pt(0, 0), pt(1, 1)];
        let (s, _) = shear_normalize(&pts);
        assert_eq!(s[0], s[1]);
        assert_ne!(s[0].x, s[2].x);
    }

    #[test]
    fn shear_on_degenerate_column() {
        let pts: Vec<_> = (0..5).map(|y| pt(3, y)).collect();
        let (s, _) = shear_normalize(&pts);
        let mut xs: Vec<_> = s.iter().map(|p| p.x.clone()).collect();
        xs.sort();
        xs.dedup();
        assert_eq!(xs.len(), 5);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual_line(&pt(0, 0)), (ExactRational::zero(), ExactRational::zero()));
        assert_eq!(dual_line(&pt(2, 3)), (ExactRational::from_int(2), ExactRational::from_int(-3)));
        let p = line_crossing(&dual_line(&pt(2, 3)), &(ExactRational::zero(), ExactRational::zero())).unwrap();
        assert_eq!(p, ExactPoint::new(ExactRational::new(3, 2), ExactRational::zero()));
        let (m, c) = dual_line(&pt(2, 3));
        assert_eq!(side_of_line(&m, &c, &pt(0, -4)), OrientationSign::Negative);
        assert_eq!(side_of_line(&ExactRational::zero(), &ExactRational::zero(), &pt(5, 1)), OrientationSign::Positive);
    }

    #[test]
    fn translation_on_unit_triangle() {
        let (a, b, c) = (pt(0, 0), pt(1, 0), pt(0, 1));
        let x = line_crossing(&dual_line(&a), &dual_line(&b)).unwrap();
        assert_eq!(x, pt(0, 0));
        let (m, k) = dual_line(&c);
        // the dual of c is y = -1, which lies below the crossing
        assert_eq!(side_of_line(&m, &k, &x), OrientationSign::Positive);
        assert_eq!(orient(&a, &b, &c), OrientationSign::Positive);
    }

    fn small_points(max: usize) -> impl Strategy<Value = Vec<ExactPoint>> {
        prop::collection::vec((-6i64..7, -6i64..7), 3..=max)
            .prop_map(|v| v.into_iter().map(|(x, y)| pt(x, y)).collect())
    }

    proptest! {
        #[test]
        fn orient_sign_algebra(p in (-50i64..50, -50i64..50), q in (-50i64..50, -50i64..50), r in (-50i64..50, -50i64..50)) {
            let (p, q, r) = (pt(p.0, p.1), pt(q.0, q.1), pt(r.0, r.1));
            let o = orient(&p, &q, &r);
            prop_assert_eq!(o, orient(&q, &r, &p));
            prop_assert_eq!(o, orient(&q, &p, &r).negate());
        }

        #[test]
        fn shear_preserves_orientation(pts in small_points(12)) {
            let (s, eps) = shear_normalize(&pts);
            prop_assert!(eps > ExactRational::zero());
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    if pts[i] != pts[j] {
                        prop_assert_ne!(&s[i].x, &s[j].x);
                    }
                    for k in 0..pts.len() {
                        prop_assert_eq!(orient(&pts[i], &pts[j], &pts[k]), orient(&s[i], &s[j], &s[k]));
                    }
                }
            }
        }

        #[test]
        fn duality_translation(pts in small_points(12)) {
            let (s, _) = shear_normalize(&pts);
            for i in 0..s.len() {
                for j in 0..s.len() {
                    if s[i].x == s[j].x { continue; }
                    let x = line_crossing(&dual_line(&s[i]), &dual_line(&s[j])).unwrap();
                    let dx = OrientationSign::from_ordering(s[j].x.cmp(&s[i].x));
                    for k in 0..s.len() {
                        let (m, c) = dual_line(&s[k]);
                        prop_assert_eq!(side_of_line(&m, &c, &x).times(dx), orient(&s[i], &s[j], &s[k]));
                    }
                }
            }
        }
    }
}
