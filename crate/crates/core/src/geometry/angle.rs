use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

use super::{GeometryError, ALGEBRAIC_TOL, RAW_MAX_DENOMINATOR};

/// The representation behind an [`Angle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleKind {
    /// `num/den · π` with `num/den ∈ (-1, 1]` in lowest terms.
    RationalPi(Ratio<i64>),
    /// The angle whose cosine is `cos` and whose sine has sign `sine_sign`.
    AlgebraicCos { cos: Ratio<i64>, sine_sign: i8 },
    /// Plain radians in `(-π, π]`.
    Raw(f64),
}

/// A rotation amount. The tag is exact; numeric evaluation happens only when
/// a matrix is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(AngleKind);

/// Order verdict for a rotation angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngleClass {
    Rational { order: u64 },
    Irrational,
    Unknown,
}

impl AngleClass {
    /// Finite order, if known. `Unknown` counts as infinite order.
    pub fn order(self) -> Option<u64> {
        match self {
            AngleClass::Rational { order } => Some(order),
            _ => None,
        }
    }

    pub fn is_rational(self) -> bool {
        matches!(self, AngleClass::Rational { .. })
    }

    pub fn label(self) -> &'static str {
        match self {
            AngleClass::Rational { .. } => "Rational",
            AngleClass::Irrational => "Irrational",
            AngleClass::Unknown => "Unknown",
        }
    }
}

fn wrap_half_turns(num: i128, den: i128) -> (i128, i128) {
    // bring num/den into (-1, 1] modulo 2
    let two_den = 2 * den;
    let mut r = num.rem_euclid(two_den);
    if r > den {
        r -= two_den;
    }
    (r, den)
}

fn wrap_radians(rad: f64) -> f64 {
    let tau = 2.0 * PI;
    let mut r = rad.rem_euclid(tau);
    if r >= tau {
        r = 0.0;
    }
    if r > PI {
        r -= tau;
    }
    r
}

fn ratio_from_i128(num: i128, den: i128) -> Ratio<i64> {
    let g = num.gcd(&den);
    let (n, d) = if g == 0 { (num, den) } else { (num / g, den / g) };
    Ratio::new_raw(n as i64, d as i64)
}

impl Angle {
    /// `num/den · π`, reduced modulo `2π` into `(-π, π]`.
    pub fn rational_pi(num: i64, den: i64) -> Result<Self, GeometryError> {
        if den == 0 {
            return Err(GeometryError::ZeroDenominator);
        }
        let (n, d) = if den < 0 {
            (-(num as i128), -(den as i128))
        } else {
            (num as i128, den as i128)
        };
        let (r, d) = wrap_half_turns(n, d);
        Ok(Angle(AngleKind::RationalPi(ratio_from_i128(r, d))))
    }

    /// The angle in `[0, π]` (or its negative) whose cosine is `cos`.
    pub fn acos(cos: Ratio<i64>, sine_sign: i8) -> Result<Self, GeometryError> {
        if sine_sign != 1 && sine_sign != -1 {
            return Err(GeometryError::InvalidSineSign(sine_sign));
        }
        if cos > Ratio::from_integer(1) || cos < Ratio::from_integer(-1) {
            return Err(GeometryError::CosineOutOfRange(cos.to_string()));
        }
        let unit = cos == Ratio::from_integer(1) || cos == Ratio::from_integer(-1);
        let sine_sign = if unit { 1 } else { sine_sign };
        Ok(Angle(AngleKind::AlgebraicCos { cos, sine_sign }))
    }

    pub fn raw(radians: f64) -> Result<Self, GeometryError> {
        if !radians.is_finite() {
            return Err(GeometryError::NonFinite(radians));
        }
        Ok(Angle(AngleKind::Raw(wrap_radians(radians))))
    }

    pub fn zero() -> Self {
        Angle(AngleKind::RationalPi(Ratio::from_integer(0)))
    }

    pub fn kind(&self) -> AngleKind {
        self.0
    }

    /// Radian measure in `(-π, π]`.
    pub fn radians(&self) -> f64 {
        match self.0 {
            AngleKind::RationalPi(r) => PI * (*r.numer() as f64) / (*r.denom() as f64),
            AngleKind::AlgebraicCos { cos, sine_sign } => {
                let c = (*cos.numer() as f64) / (*cos.denom() as f64);
                f64::from(sine_sign) * c.acos()
            }
            AngleKind::Raw(r) => r,
        }
    }

    /// Absolute radian measure.
    pub fn size(&self) -> f64 {
        self.radians().abs()
    }

    /// Radian measure of `exponent` copies of this angle, reduced into
    /// `(-π, π]`. Exact for `RationalPi`.
    pub fn times(&self, exponent: i64) -> f64 {
        match self.0 {
            AngleKind::RationalPi(r) => {
                let (n, d) = wrap_half_turns(*r.numer() as i128 * exponent as i128, *r.denom() as i128);
                PI * (n as f64) / (d as f64)
            }
            _ => wrap_radians(self.radians() * exponent as f64),
        }
    }

    pub fn negate(&self) -> Angle {
        match self.0 {
            AngleKind::RationalPi(r) => Angle::rational_pi(-*r.numer(), *r.denom()).expect("denominator is nonzero"),
            AngleKind::AlgebraicCos { cos, sine_sign } => {
                Angle::acos(cos, -sine_sign).expect("cosine already validated")
            }
            AngleKind::Raw(r) => Angle(AngleKind::Raw(wrap_radians(-r))),
        }
    }

    pub fn classify(&self) -> AngleClass {
        classify_angle(self)
    }
}

/// Least `n ≥ 1` with `n · num/den` an even integer.
fn rational_pi_order(r: Ratio<i64>) -> u64 {
    let p = r.numer().unsigned_abs();
    let two_q = 2 * r.denom().unsigned_abs();
    two_q / p.gcd(&two_q)
}

/// Rational when the tag proves it, Irrational when Niven's theorem does,
/// Unknown for raw angles that are not near `k·π/n` with `n ≤ 360`.
pub fn classify_angle(a: &Angle) -> AngleClass {
    match a.0 {
        AngleKind::RationalPi(r) => AngleClass::Rational { order: rational_pi_order(r) },
        AngleKind::AlgebraicCos { cos, .. } => {
            // the only rational cosines of rational multiples of π
            let order = match (*cos.numer(), *cos.denom()) {
                (1, 1) => Some(1),
                (-1, 1) => Some(2),
                (0, 1) => Some(4),
                (-1, 2) => Some(3),
                (1, 2) => Some(6),
                _ => None,
            };
            match order {
                Some(order) => AngleClass::Rational { order },
                None => AngleClass::Irrational,
            }
        }
        AngleKind::Raw(rad) => {
            for n in 1..=RAW_MAX_DENOMINATOR {
                let k = (rad * n as f64 / PI).round();
                if (rad - k * PI / n as f64).abs() < ALGEBRAIC_TOL {
                    let r = Ratio::new(k as i64, n);
                    return AngleClass::Rational { order: rational_pi_order(r) };
                }
            }
            AngleClass::Unknown
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            AngleKind::RationalPi(r) => write!(f, "pi {}/{}", r.numer(), r.denom()),
            AngleKind::AlgebraicCos { cos, sine_sign } => {
                let sign = if sine_sign > 0 { '+' } else { '-' };
                if *cos.denom() == 1 {
                    write!(f, "acos {} {}", cos.numer(), sign)
                } else {
                    write!(f, "acos {}/{} {}", cos.numer(), cos.denom(), sign)
                }
            }
            AngleKind::Raw(r) => write!(f, "rad {r:?}"),
        }
    }
}

fn parse_ratio(s: &str) -> Option<Ratio<i64>> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(Ratio::new(n, d))
            }
        }
        None => s.trim().parse::<i64>().ok().map(Ratio::from_integer),
    }
}

impl FromStr for Angle {
    type Err = GeometryError;

    /// Parses `pi 1/2`, `acos 1/3 +`, `acos -1/3` or `rad 0.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeometryError::AngleSyntax(s.to_string());
        let mut parts = s.split_whitespace();
        let tag = parts.next().ok_or_else(bad)?;
        let value = parts.next().ok_or_else(bad)?;
        let extra = parts.next();
        if parts.next().is_some() {
            return Err(bad());
        }
        match tag {
            "pi" => {
                if extra.is_some() {
                    return Err(bad());
                }
                let r = parse_ratio(value).ok_or_else(bad)?;
                Angle::rational_pi(*r.numer(), *r.denom())
            }
            "acos" => {
                let cos = parse_ratio(value).ok_or_else(bad)?;
                let sign = match extra {
                    None | Some("+") => 1,
                    Some("-") => -1,
                    Some(_) => return Err(bad()),
                };
                Angle::acos(cos, sign)
            }
            "rad" => {
                if extra.is_some() {
                    return Err(bad());
                }
                let x: f64 = value.parse().map_err(|_| bad())?;
                Angle::raw(x)
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_pi_is_wrapped_into_half_open_range() {
        let a = Angle::rational_pi(3, 2).unwrap();
        assert_eq!(a.kind(), AngleKind::RationalPi(Ratio::new(-1, 2)));
        let b = Angle::rational_pi(-1, 1).unwrap();
        assert_eq!(b.kind(), AngleKind::RationalPi(Ratio::new(1, 1)));
        let c = Angle::rational_pi(4, -8).unwrap();
        assert_eq!(c.kind(), AngleKind::RationalPi(Ratio::new(-1, 2)));
        assert!(Angle::rational_pi(1, 0).is_err());
    }

    #[test]
    fn radians_stay_in_range() {
        for &x in &[-10.0, -PI, -3.0, 0.0, 1.0, PI, 4.0, 100.0] {
            let r = Angle::raw(x).unwrap().radians();
            assert!(r > -PI && r <= PI, "{x} -> {r}");
        }
        assert_eq!(Angle::acos(Ratio::from_integer(-1), -1).unwrap().radians(), PI);
        assert!(Angle::raw(f64::NAN).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_angle(&Angle::rational_pi(1, 2).unwrap()), AngleClass::Rational { order: 4 });
        assert_eq!(classify_angle(&Angle::acos(Ratio::new(1, 3), 1).unwrap()), AngleClass::Irrational);
        assert_eq!(classify_angle(&Angle::acos(Ratio::new(1, 2), 1).unwrap()), AngleClass::Rational { order: 6 });
        assert_eq!(classify_angle(&Angle::acos(Ratio::new(-1, 2), 1).unwrap()), AngleClass::Rational { order: 3 });
        assert_eq!(classify_angle(&Angle::acos(Ratio::new(0, 1), -1).unwrap()), AngleClass::Rational { order: 4 });
        assert_eq!(classify_angle(&Angle::zero()), AngleClass::Rational { order: 1 });
        assert_eq!(classify_angle(&Angle::rational_pi(2, 3).unwrap()), AngleClass::Rational { order: 3 });
        assert_eq!(classify_angle(&Angle::rational_pi(1, 1).unwrap()), AngleClass::Rational { order: 2 });
    }

    #[test]
    fn classify_raw_angles() {
        assert_eq!(classify_angle(&Angle::raw(PI / 7.0).unwrap()), AngleClass::Rational { order: 14 });
        assert_eq!(classify_angle(&Angle::raw(-2.0 * PI / 3.0).unwrap()), AngleClass::Rational { order: 3 });
        let golden = PI * (5f64.sqrt() - 1.0) / 2.0;
        assert_eq!(classify_angle(&Angle::raw(golden).unwrap()), AngleClass::Unknown);
    }

    #[test]
    fn times_is_exact_for_rational_tags() {
        let a = Angle::rational_pi(1, 3).unwrap();
        assert_eq!(a.times(6), 0.0);
        assert!((a.times(4) - (-2.0 * PI / 3.0)).abs() < 1e-15);
        let g = Angle::raw(1.0).unwrap();
        assert!((g.times(3) - 3.0).abs() < 1e-15);
        assert!((g.times(4) - (4.0 - 2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn negate_reverses_sense() {
        let a = Angle::acos(Ratio::new(-1, 3), 1).unwrap();
        assert!((a.negate().radians() + a.radians()).abs() < 1e-15);
        let b = Angle::rational_pi(1, 1).unwrap();
        assert_eq!(b.negate(), b);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["pi 1/2", "acos 1/3 +", "acos -1/3 -", "pi 0/1", "acos 0 +"] {
            let a: Angle = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        let r: Angle = "rad 0.5".parse().unwrap();
        assert_eq!(r.radians(), 0.5);
        let d: Angle = "acos 1/2".parse().unwrap();
        assert_eq!(d.to_string(), "acos 1/2 +");
        for bad in ["", "pi", "deg 30", "acos 2 +", "pi 1/0", "acos 1/3 x", "rad abc", "pi 1/2 +"] {
            assert!(bad.parse::<Angle>().is_err(), "{bad}");
        }
    }
}
