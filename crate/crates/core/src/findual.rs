//! Linearly recursive functionals on `K[x]`, with the products induced by
//! the primitive (`Delta x = x (x) 1 + 1 (x) x`) and grouplike
//! (`Delta x = x (x) x`) bialgebra structures.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::scalar::{binomial_row, Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Binomial convolution of value sequences.
    Primitive,
    /// Pointwise product of value sequences.
    Grouplike,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Primitive => "primitive",
            Model::Grouplike => "grouplike",
        })
    }
}

/// `lambda` with `lambda(x^{n+d}) = -sum_i f_i lambda(x^{n+i})`, stored by
/// its monic annihilator `f` (ascending) and `lambda(1), ..., lambda(x^{d-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFunctional", into = "RawFunctional")]
pub struct RecursiveFunctional {
    field: Field,
    model: Model,
    annihilator: Vector,
    values: Vector,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawFunctional {
    model: Model,
    annihilator: Vec<Scalar>,
    values: Vec<Scalar>,
}

impl TryFrom<RawFunctional> for RecursiveFunctional {
    type Error = Error;

    fn try_from(r: RawFunctional) -> Result<Self> {
        let field = r
            .annihilator
            .last()
            .map(Scalar::field)
            .ok_or_else(|| Error::InvalidStructure("empty annihilator".into()))?;
        RecursiveFunctional::new(field, r.model, r.annihilator, r.values)
    }
}

impl From<RecursiveFunctional> for RawFunctional {
    fn from(r: RecursiveFunctional) -> Self {
        RawFunctional {
            model: r.model,
            annihilator: r.annihilator,
            values: r.values,
        }
    }
}

impl RecursiveFunctional {
    pub fn new(field: Field, model: Model, annihilator: Vector, values: Vector) -> Result<Self> {
        for c in annihilator.iter().chain(&values) {
            field.check(c.field())?;
        }
        let d = annihilator.len().saturating_sub(1);
        if d == 0 {
            return Err(Error::InvalidStructure("annihilator must have degree at least 1".into()));
        }
        if !annihilator[d].is_one() {
            return Err(Error::InvalidStructure("annihilator is not monic".into()));
        }
        if values.len() != d {
            return Err(Error::DimensionMismatch {
                context: "initial values",
                expected: d,
                found: values.len(),
            });
        }
        Ok(RecursiveFunctional {
            field,
            model,
            annihilator,
            values,
        })
    }

    /// Annihilator `x`, value `[0]`.
    pub fn zero(field: Field, model: Model) -> Self {
        RecursiveFunctional {
            field,
            model,
            annihilator: vec![field.zero(), field.one()],
            values: vec![field.zero()],
        }
    }

    /// `x^n |-> r^n`, annihilator `x - r`.
    pub fn geometric(field: Field, model: Model, r: Scalar) -> Result<Self> {
        field.check(r.field())?;
        RecursiveFunctional::new(field, model, vec![-r, field.one()], vec![field.one()])
    }

    pub fn ones(field: Field, model: Model) -> Self {
        RecursiveFunctional::geometric(field, model, field.one()).expect("field matches")
    }

    /// `x^n |-> [n = 0]`.
    pub fn delta0(field: Field, model: Model) -> Self {
        RecursiveFunctional {
            field,
            model,
            annihilator: vec![field.zero(), field.one()],
            values: vec![field.one()],
        }
    }

    /// The multiplicative unit: evaluation at `x = 1` or at `x = 0`.
    pub fn unit(field: Field, model: Model) -> Self {
        match model {
            Model::Grouplike => RecursiveFunctional::ones(field, model),
            Model::Primitive => RecursiveFunctional::delta0(field, model),
        }
    }

    /// Annihilator `x^2 - x - 1`, values `[0, 1]`.
    pub fn fibonacci(field: Field, model: Model) -> Self {
        RecursiveFunctional {
            field,
            model,
            annihilator: vec![field.from_i64(-1), field.from_i64(-1), field.one()],
            values: vec![field.zero(), field.one()],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn annihilator(&self) -> &[Scalar] {
        &self.annihilator
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn degree(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    /// `lambda(x^0), ..., lambda(x^{len-1})`.
    pub fn sequence(&self, len: usize) -> Vector {
        let d = self.degree();
        let mut s: Vector = self.values.iter().take(len).cloned().collect();
        while s.len() < len {
            let n = s.len() - d;
            let mut next = self.field.zero();
            for i in 0..d {
                next -= &(&self.annihilator[i] * &s[n + i]);
            }
            s.push(next);
        }
        s
    }

    pub fn evaluate(&self, n: usize) -> Scalar {
        self.sequence(n + 1).pop().expect("nonempty")
    }

    fn compatible(&self, other: &RecursiveFunctional) -> Result<()> {
        self.field.check(other.field)?;
        if self.model != other.model {
            return Err(Error::ModelMismatch);
        }
        Ok(())
    }

    /// Fits a recurrence of degree at most `bound` on the first `2 bound`
    /// terms of `seq` and checks it on the rest.
    fn refit(&self, seq: &[Scalar], bound: usize) -> Result<RecursiveFunctional> {
        let fit = fit_recurrence(self.field, self.model, &seq[..2 * bound], bound)?
            .ok_or(Error::BoundExceeded { bound })?;
        if fit.sequence(seq.len()) != seq {
            return Err(Error::BoundExceeded { bound });
        }
        Ok(fit)
    }

    pub fn add(&self, other: &RecursiveFunctional) -> Result<RecursiveFunctional> {
        self.compatible(other)?;
        let bound = self.degree() + other.degree();
        let len = 5 * bound;
        let seq: Vector = self
            .sequence(len)
            .iter()
            .zip(other.sequence(len))
            .map(|(a, b)| a + &b)
            .collect();
        self.refit(&seq, bound)
    }

    pub fn scale(&self, c: &Scalar) -> Result<RecursiveFunctional> {
        self.field.check(c.field())?;
        let values = self.values.iter().map(|v| v * c).collect();
        Ok(RecursiveFunctional::new(self.field, self.model, self.annihilator.clone(), values)?.minimize())
    }

    pub fn neg(&self) -> RecursiveFunctional {
        self.scale(&-self.field.one()).expect("same field")
    }

    /// `(lambda mu)(a) = (lambda (x) mu)(Delta a)`. Values are computed to
    /// index `2 d1 d2`, fitted with degree at most `d1 d2`, then checked on
    /// `3 d1 d2` further terms.
    pub fn multiply(&self, other: &RecursiveFunctional) -> Result<RecursiveFunctional> {
        self.compatible(other)?;
        let bound = self.degree() * other.degree();
        let len = 5 * bound;
        let a = self.sequence(len);
        let b = other.sequence(len);
        let seq: Vector = match self.model {
            Model::Grouplike => a.iter().zip(&b).map(|(x, y)| x * y).collect(),
            Model::Primitive => (0..len)
                .map(|n| {
                    binomial_row(self.field, n)
                        .iter()
                        .enumerate()
                        .fold(self.field.zero(), |acc, (k, c)| &acc + &(&(c * &a[k]) * &b[n - k]))
                })
                .collect(),
        };
        self.refit(&seq, bound)
    }

    /// The annihilator of least degree, with the zero functional sent to
    /// annihilator `x` and value `[0]`.
    pub fn minimize(&self) -> RecursiveFunctional {
        let d = self.degree();
        let seq = self.sequence(2 * d);
        fit_recurrence(self.field, self.model, &seq, d)
            .expect("field matches")
            .expect("own recurrence fits")
    }
}

/// Least-degree recurrence `f` with `deg f <= max_degree` and
/// `2 deg f <= seq.len()` satisfied by every term, via the Hankel system.
fn fit_recurrence(field: Field, model: Model, seq: &[Scalar], max_degree: usize) -> Result<Option<RecursiveFunctional>> {
    if seq.iter().all(Scalar::is_zero) {
        return Ok(Some(RecursiveFunctional::zero(field, model)));
    }
    for d in 1..=max_degree.min(seq.len() / 2) {
        let eqs = seq.len() - d;
        let mut entries = Vec::with_capacity(eqs * d);
        for n in 0..eqs {
            entries.extend_from_slice(&seq[n..n + d]);
        }
        let h = Matrix::new(field, eqs, d, entries)?;
        let rhs: Vector = (0..eqs).map(|n| -seq[n + d].clone()).collect();
        if let Some(c) = h.solve(&rhs)? {
            let mut annihilator = c;
            annihilator.push(field.one());
            return RecursiveFunctional::new(field, model, annihilator, seq[..d].to_vec()).map(Some);
        }
    }
    Ok(None)
}

/// The least recurrence of degree at most `max_degree` fitting all of
/// `prefix`. Degrees above half the prefix length are not tried, since any
/// such fit is underdetermined.
pub fn from_prefix(field: Field, model: Model, prefix: &[Scalar], max_degree: usize) -> Result<Option<RecursiveFunctional>> {
    for c in prefix {
        field.check(c.field())?;
    }
    fit_recurrence(field, model, prefix, max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn q(v: &[i64]) -> Vector {
        v.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn evaluation() {
        let fib = RecursiveFunctional::fibonacci(Q, Model::Grouplike);
        assert_eq!(fib.sequence(8), q(&[0, 1, 1, 2, 3, 5, 8, 13]));
        let c = RecursiveFunctional::new(Q, Model::Grouplike, q(&[0, 1]), q(&[7])).unwrap();
        assert_eq!(c.sequence(3), q(&[7, 0, 0]));
        assert!(RecursiveFunctional::new(Q, Model::Grouplike, q(&[0, 2]), q(&[1])).is_err());
        assert!(RecursiveFunctional::new(Q, Model::Grouplike, q(&[1]), q(&[])).is_err());
    }

    #[test]
    fn cancellation_gives_canonical_zero() {
        let fib = RecursiveFunctional::fibonacci(Q, Model::Primitive);
        let z = fib.add(&fib.neg()).unwrap();
        assert_eq!(z, RecursiveFunctional::zero(Q, Model::Primitive));
    }

    #[test]
    fn minimize_drops_repeated_root() {
        let r = RecursiveFunctional::new(Q, Model::Grouplike, q(&[1, -2, 1]), q(&[1, 1])).unwrap();
        assert_eq!(r.minimize(), RecursiveFunctional::ones(Q, Model::Grouplike));
        // (x - 1)^2 with values 1, 2 is n + 1 and stays degree 2
        let s = RecursiveFunctional::new(Q, Model::Grouplike, q(&[1, -2, 1]), q(&[1, 2])).unwrap();
        assert_eq!(s.minimize(), s);
    }

    #[test]
    fn products() {
        let two = RecursiveFunctional::geometric(Q, Model::Grouplike, Q.from_i64(2)).unwrap();
        let three = RecursiveFunctional::geometric(Q, Model::Grouplike, Q.from_i64(3)).unwrap();
        let six = RecursiveFunctional::geometric(Q, Model::Grouplike, Q.from_i64(6)).unwrap();
        assert_eq!(two.multiply(&three).unwrap(), six);
        let ones = RecursiveFunctional::ones(Q, Model::Primitive);
        let p = ones.multiply(&ones).unwrap();
        assert_eq!(p, RecursiveFunctional::geometric(Q, Model::Primitive, Q.from_i64(2)).unwrap());
        assert!(two.multiply(&ones).is_err());
    }

    #[test]
    fn prefix_recovery() {
        let r = from_prefix(Q, Model::Grouplike, &q(&[1, 1, 1, 1]), 3).unwrap().unwrap();
        assert_eq!(r, RecursiveFunctional::ones(Q, Model::Grouplike));
        let f = from_prefix(Q, Model::Grouplike, &q(&[0, 1, 1, 2, 3, 5, 8]), 3).unwrap().unwrap();
        assert_eq!(f.annihilator(), &q(&[-1, -1, 1])[..]);
        let fact = from_prefix(Q, Model::Grouplike, &q(&[1, 1, 2, 6, 24, 120, 720, 5040]), 3).unwrap();
        assert!(fact.is_none());
    }

    #[test]
    fn json_round_trip() {
        let f = RecursiveFunctional::fibonacci(Field::Prime(7), Model::Primitive);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"model":"primitive","annihilator":["6 mod 7","6 mod 7","1 mod 7"],"values":["0 mod 7","1 mod 7"]}"#);
        let back: RecursiveFunctional = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
