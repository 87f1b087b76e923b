//! Known polynomials in the ideals of small ternary fradeco varieties.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;
use serde::Serialize;

use crate::error::{FradecoError, Result};
use crate::linalg::leibniz_det;
use crate::tensor::{exponent_rank, SymTensor};

type Exp = [u32; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KnownEquation {
    /// Cubic on `T_{4,3,3}` built from 3x3 minors of a 3x6 matrix.
    Cubic433,
    /// Quadric on `T_{4,3,4}`.
    Quadric434,
    /// The quadric of `T_{4,3,4}` with `t_ijk -> t_{i,j,k+1}`, on `T_{4,3,5}`.
    Quadric435Shift,
    /// The 128-term cubic on `T_{5,3,4}`.
    Cubic534,
    /// Determinant of the 6x6 catalecticant of a ternary quartic.
    CatalecticantDet534,
}

pub const ALL_EQUATIONS: [KnownEquation; 5] = [
    KnownEquation::Cubic433,
    KnownEquation::Quadric434,
    KnownEquation::Quadric435Shift,
    KnownEquation::Cubic534,
    KnownEquation::CatalecticantDet534,
];

/// Scalars the equations can be evaluated in.
pub trait Scalar: Num + Clone {
    fn from_i64(v: i64) -> Self;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Polynomial as `(coefficient, factors)` terms.
pub type Terms = Vec<(i64, Vec<Exp>)>;

fn e(s: &str) -> Exp {
    let b = s.as_bytes();
    [(b[0] - b'0') as u32, (b[1] - b'0') as u32, (b[2] - b'0') as u32]
}

fn term(c: i64, factors: &[&str]) -> (i64, Vec<Exp>) {
    (c, factors.iter().map(|f| e(f)).collect())
}

fn quadric_434_terms() -> Terms {
    vec![
        term(8, &["013", "013"]),
        term(-8, &["004", "022"]),
        term(8, &["031", "031"]),
        term(-8, &["022", "040"]),
        term(8, &["211", "211"]),
        term(-8, &["202", "220"]),
        term(18, &["112", "112"]),
        term(-18, &["103", "121"]),
        term(18, &["121", "121"]),
        term(-18, &["112", "130"]),
        term(1, &["004", "040"]),
        term(19, &["022", "022"]),
        term(-20, &["013", "031"]),
        term(1, &["004", "220"]),
        term(1, &["022", "202"]),
        term(-2, &["013", "211"]),
        term(1, &["040", "202"]),
        term(1, &["022", "220"]),
        term(-2, &["031", "211"]),
    ]
}

const S3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Distinct images of a monomial under simultaneous permutation of the
/// three exponent positions.
pub fn s3_orbit(factors: &[Exp]) -> Vec<Vec<Exp>> {
    let mut seen: Vec<Vec<Exp>> = Vec::new();
    for p in S3 {
        let mut m: Vec<Exp> = factors.iter().map(|a| [a[p[0]], a[p[1]], a[p[2]]]).collect();
        m.sort();
        if !seen.contains(&m) {
            seen.push(m);
        }
    }
    seen
}

/// `(coefficient, representative monomial, orbit size)` brackets of the
/// `T_{5,3,4}` cubic.
fn cubic_534_brackets() -> Vec<(i64, [&'static str; 3], usize)> {
    vec![
        (46, ["022", "202", "220"], 1),
        (73, ["112", "121", "211"], 1),
        (-4, ["004", "040", "400"], 1),
        (19, ["013", "130", "301"], 2),
        (-50, ["004", "112", "112"], 3),
        (-22, ["004", "220", "220"], 3),
        (-18, ["022", "211", "211"], 3),
        (50, ["004", "022", "202"], 3),
        (26, ["004", "130", "310"], 3),
        (100, ["013", "103", "112"], 3),
        (-53, ["013", "121", "310"], 3),
        (5, ["004", "022", "400"], 6),
        (-50, ["013", "013", "202"], 6),
        (-5, ["013", "013", "220"], 6),
        (45, ["004", "031", "211"], 6),
        (-40, ["022", "202", "202"], 6),
        (5, ["004", "022", "220"], 6),
        (40, ["022", "112", "112"], 6),
        (-5, ["004", "130", "130"], 6),
        (-45, ["004", "121", "121"], 6),
        (-10, ["004", "112", "130"], 6),
        (-45, ["013", "022", "211"], 6),
        (35, ["013", "031", "202"], 6),
        (10, ["013", "103", "130"], 6),
        (10, ["013", "112", "121"], 6),
        (-80, ["013", "112", "301"], 6),
        (80, ["013", "202", "211"], 6),
        (8, ["013", "211", "220"], 6),
    ]
}

/// Expanded `T_{5,3,4}` cubic. Fails if a bracket's orbit does not have the
/// stated size.
pub fn cubic_534_terms() -> Result<Terms> {
    let mut acc: BTreeMap<Vec<Exp>, i64> = BTreeMap::new();
    for (c, rep, size) in cubic_534_brackets() {
        let rep: Vec<Exp> = rep.iter().map(|f| e(f)).collect();
        let orbit = s3_orbit(&rep);
        if orbit.len() != size {
            return Err(FradecoError::InvalidArgument(format!(
                "orbit of {rep:?} has size {}, expected {size}",
                orbit.len()
            )));
        }
        for m in orbit {
            *acc.entry(m).or_insert(0) += c;
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| *c != 0).map(|(m, c)| (c, m)).collect())
}

impl KnownEquation {
    pub fn name(&self) -> &'static str {
        match self {
            KnownEquation::Cubic433 => "cubic_433",
            KnownEquation::Quadric434 => "quadric_434",
            KnownEquation::Quadric435Shift => "quadric_435_shift",
            KnownEquation::Cubic534 => "cubic_534",
            KnownEquation::CatalecticantDet534 => "catalecticant_det_534",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        ALL_EQUATIONS
            .iter()
            .copied()
            .find(|eq| eq.name() == name)
            .ok_or_else(|| FradecoError::UnknownEquation(name.to_string()))
    }

    /// `(n, d)` of the tensors it applies to.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            KnownEquation::Cubic433 => (3, 3),
            KnownEquation::Quadric434 | KnownEquation::Cubic534 | KnownEquation::CatalecticantDet534 => (3, 4),
            KnownEquation::Quadric435Shift => (3, 5),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            KnownEquation::Cubic433 | KnownEquation::Cubic534 => 3,
            KnownEquation::Quadric434 | KnownEquation::Quadric435Shift => 2,
            KnownEquation::CatalecticantDet534 => 6,
        }
    }

    /// Evaluates at coordinates `coords` (in the standard exponent order).
    pub fn evaluate_coords<T: Scalar>(&self, coords: &[T]) -> Result<T> {
        let (n, d) = self.shape();
        let expected = crate::tensor::basis_len(n, d);
        if coords.len() != expected {
            return Err(FradecoError::ShapeMismatch(format!(
                "{} needs {expected} coordinates (n = {n}, d = {d}), got {}",
                self.name(),
                coords.len()
            )));
        }
        let t = |a: Exp| coords[exponent_rank(&a)].clone();
        Ok(match self {
            KnownEquation::Cubic433 => cubic_433(t),
            KnownEquation::Quadric434 => eval_terms(&quadric_434_terms(), t),
            KnownEquation::Quadric435Shift => {
                eval_terms(&quadric_434_terms(), |a: Exp| t([a[0], a[1], a[2] + 1]))
            }
            KnownEquation::Cubic534 => eval_terms(&cubic_534_terms()?, t),
            KnownEquation::CatalecticantDet534 => {
                let rows = crate::tensor::index_basis(3, 2);
                let m: Vec<Vec<T>> = rows
                    .iter()
                    .map(|b| {
                        rows.iter()
                            .map(|c| t([b[0] + c[0], b[1] + c[1], b[2] + c[2]]))
                            .collect()
                    })
                    .collect();
                leibniz_det(&m)
            }
        })
    }

    pub fn evaluate(&self, tensor: &SymTensor) -> Result<f64> {
        self.check_shape(tensor.n(), tensor.d())?;
        self.evaluate_coords(tensor.coords())
    }

    /// Value divided by `max|t|^degree`.
    pub fn evaluate_normalized(&self, tensor: &SymTensor) -> Result<f64> {
        let v = self.evaluate(tensor)?;
        let scale = tensor.max_abs();
        if scale == 0.0 {
            return Ok(0.0);
        }
        Ok(v / scale.powi(self.degree() as i32))
    }

    fn check_shape(&self, n: usize, d: usize) -> Result<()> {
        let (en, ed) = self.shape();
        if (n, d) != (en, ed) {
            return Err(FradecoError::ShapeMismatch(format!(
                "{} applies to n = {en}, d = {ed}; got n = {n}, d = {d}",
                self.name()
            )));
        }
        Ok(())
    }
}

/// Evaluates a named equation exactly at rational coordinates.
pub fn eval_known_equation_exact(name: &str, n: usize, d: usize, coords: &[BigRational]) -> Result<BigRational> {
    let eq = KnownEquation::from_name(name)?;
    eq.check_shape(n, d)?;
    eq.evaluate_coords(coords)
}

pub fn eval_known_equation(name: &str, tensor: &SymTensor) -> Result<f64> {
    KnownEquation::from_name(name)?.evaluate(tensor)
}

fn eval_terms<T: Scalar>(terms: &Terms, t: impl Fn(Exp) -> T) -> T {
    let mut acc = T::zero();
    for (c, factors) in terms {
        let mut p = T::from_i64(*c);
        for &a in factors {
            p = p * t(a);
        }
        acc = acc + p;
    }
    acc
}

fn cubic_433<T: Scalar>(t: impl Fn(Exp) -> T) -> T {
    let cols = [
        [e("300"), e("210"), e("201")],
        [e("210"), e("120"), e("111")],
        [e("120"), e("030"), e("021")],
        [e("201"), e("111"), e("102")],
        [e("111"), e("021"), e("012")],
        [e("102"), e("012"), e("003")],
    ];
    let minor = |i: usize, j: usize, k: usize| -> T {
        let m: Vec<Vec<T>> = (0..3)
            .map(|row| vec![t(cols[i - 1][row]), t(cols[j - 1][row]), t(cols[k - 1][row])])
            .collect();
        leibniz_det(&m)
    };
    let two = T::from_i64(2);
    let four = T::from_i64(4);
    let mut acc = minor(1, 2, 3);
    acc = acc + two.clone() * minor(1, 4, 5);
    acc = acc + two * minor(3, 4, 5);
    acc = acc - minor(1, 2, 6);
    acc = acc - minor(2, 3, 6);
    acc - four * minor(4, 5, 6)
}
