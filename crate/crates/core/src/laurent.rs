//! Finite Laurent polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `sum_k c_k z^k` over finitely many integer `k`. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(k: i64, c: impl Into<Complex64>) -> Self {
        let mut poly = Self::zero();
        poly.add_term(k, c.into());
        poly
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut poly = Self::zero();
        for (k, c) in terms {
            poly.add_term(k, c);
        }
        poly
    }

    /// Add `c z^k`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, k: i64, c: Complex64) {
        let entry = self.terms.entry(k).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.terms.get(&k).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k, v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficient-wise comparison relative to `max(1, largest coefficient)`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.max_abs().max(other.max_abs()).max(1.0);
        self.sub(other).max_abs() <= tol * scale
    }

    /// Apply a per-monomial rule `z^k -> c(k) z^(k')`.
    pub fn map_monomials(&self, rule: impl Fn(i64) -> (i64, Complex64)) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.terms() {
            let (target, factor) = rule(k);
            out.add_term(target, c * factor);
        }
        out
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms().map(|(k, c)| c * z.powi(k as i32)).sum()
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            map.serialize_entry(&k.to_string(), &[c.re, c.im])?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from integer exponents to [re, im] pairs")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<LaurentPoly, A::Error> {
                let mut poly = LaurentPoly::zero();
                while let Some((key, [re, im])) = access.next_entry::<String, [f64; 2]>()? {
                    let k = key.trim().parse::<i64>().map_err(|_| de::Error::custom(format!("bad exponent {key:?}")))?;
                    poly.add_term(k, Complex64::new(re, im));
                }
                Ok(poly)
            }
        }

        deserializer.deserialize_map(PolyVisitor)
    }
}
