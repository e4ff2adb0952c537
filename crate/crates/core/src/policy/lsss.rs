use std::collections::BTreeMap;

use crate::algebra::{default_attribute, hash_to_attribute, Decoder, Encoder, Scalar};

use super::{AttributeSet, Formula, PolicyError};

/// LSSS access structure `(M, rho)`: an `l_s x k_s` share-generating matrix
/// and the attribute labelling each row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessStructure {
    matrix: Vec<Vec<Scalar>>,
    rho: Vec<Scalar>,
    labels: Option<Vec<String>>,
}

impl AccessStructure {
    pub fn new(matrix: Vec<Vec<Scalar>>, rho: Vec<Scalar>) -> Result<Self, PolicyError> {
        if matrix.is_empty() || matrix[0].is_empty() {
            return Err(PolicyError::InvalidStructure("empty matrix".into()));
        }
        let cols = matrix[0].len();
        if matrix.iter().any(|row| row.len() != cols) {
            return Err(PolicyError::InvalidStructure("ragged matrix".into()));
        }
        if rho.len() != matrix.len() {
            return Err(PolicyError::InvalidStructure(format!(
                "{} rows but {} row labels",
                matrix.len(),
                rho.len()
            )));
        }
        if rho.iter().any(Scalar::is_zero) {
            return Err(PolicyError::InvalidStructure("zero attribute".into()));
        }
        let theta = default_attribute();
        if rho.contains(&theta) {
            return Err(PolicyError::ReservedAttribute);
        }
        Ok(AccessStructure {
            matrix,
            rho,
            labels: None,
        })
    }

    /// Standard AND/OR vector construction: an OR gate hands its vector to
    /// both children; an AND gate with vector `v` (padded to the current
    /// width `c`) gives `v|1` to the left child and `0..0|-1` to the right.
    pub fn from_formula(formula: &Formula) -> Result<Self, PolicyError> {
        let mut rows: Vec<(Vec<i64>, String)> = Vec::with_capacity(formula.leaf_count());
        let mut width = 1usize;
        assign(formula, vec![1], &mut width, &mut rows);
        let labels: Vec<String> = rows.iter().map(|(_, l)| l.clone()).collect();
        let matrix = rows
            .into_iter()
            .map(|(mut v, _)| {
                v.resize(width, 0);
                v.into_iter().map(Scalar::from_i64).collect()
            })
            .collect();
        let rho = labels
            .iter()
            .map(|l| hash_to_attribute(l.as_bytes()))
            .collect();
        let mut a = Self::new(matrix, rho)?;
        a.labels = Some(labels);
        Ok(a)
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.matrix[i]
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.matrix
    }

    pub fn rho(&self, i: usize) -> &Scalar {
        &self.rho[i]
    }

    pub fn rho_all(&self) -> &[Scalar] {
        &self.rho
    }

    /// Row labels, when the structure came from a formula.
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// `lambda_i = M_i . v` for every row.
    pub fn shares(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols(), "sharing vector width");
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(m, x)| *m * x).sum())
            .collect()
    }

    pub fn encode_into(&self, enc: &mut Encoder) {
        enc.u64(self.rows() as u64).u64(self.cols() as u64);
        for (row, a) in self.matrix.iter().zip(&self.rho) {
            for m in row {
                enc.scalar(m);
            }
            enc.scalar(a);
        }
    }

    /// Inverse of [`AccessStructure::encode_into`]; row labels are not carried.
    pub fn decode(dec: &mut Decoder<'_>) -> Result<Self, PolicyError> {
        let rows = dec.u64()? as usize;
        let cols = dec.u64()? as usize;
        if rows == 0 || cols == 0 || rows > 4096 || cols > 4096 {
            return Err(PolicyError::InvalidStructure("matrix dimensions".into()));
        }
        let mut matrix = Vec::with_capacity(rows);
        let mut rho = Vec::with_capacity(rows);
        for _ in 0..rows {
            let row = (0..cols)
                .map(|_| dec.scalar())
                .collect::<Result<Vec<_>, _>>()?;
            matrix.push(row);
            rho.push(dec.scalar()?);
        }
        Self::new(matrix, rho)
    }
}

fn assign(f: &Formula, v: Vec<i64>, width: &mut usize, rows: &mut Vec<(Vec<i64>, String)>) {
    match f {
        Formula::Attr(label) => rows.push((v, label.clone())),
        Formula::Or(l, r) => {
            assign(l, v.clone(), width, rows);
            assign(r, v, width, rows);
        }
        Formula::And(l, r) => {
            let mut left = v;
            left.resize(*width, 0);
            left.push(1);
            let mut right = vec![0; *width];
            right.push(-1);
            *width += 1;
            assign(l, left, width, rows);
            assign(r, right, width, rows);
        }
    }
}

/// Parses a policy formula and converts it to an access structure.
pub fn policy_to_lsss(text: &str) -> Result<AccessStructure, PolicyError> {
    AccessStructure::from_formula(&Formula::parse(text)?)
}

/// Finds `{w_i}` over rows with `rho(i) in W` such that
/// `sum w_i M_i = (1, 0, ..., 0)`, or `None` when `W` does not satisfy the
/// structure. Rows outside `W` never appear in the result.
pub fn reconstruction_coefficients(
    access: &AccessStructure,
    w: &AttributeSet,
) -> Option<BTreeMap<usize, Scalar>> {
    let usable: Vec<usize> = (0..access.rows())
        .filter(|&i| w.contains(access.rho(i)))
        .collect();
    if usable.is_empty() {
        return None;
    }
    let cols = access.cols();
    // Augmented system M_I^T w = e_1: one equation per column.
    let mut sys: Vec<Vec<Scalar>> = (0..cols)
        .map(|j| {
            let mut eq: Vec<Scalar> = usable.iter().map(|&i| access.row(i)[j]).collect();
            eq.push(if j == 0 {
                Scalar::one()
            } else {
                Scalar::zero()
            });
            eq
        })
        .collect();
    let unknowns = usable.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..cols).find(|&k| !sys[k][c].is_zero()) else {
            continue;
        };
        sys.swap(r, p);
        let inv = sys[r][c].inverse().expect("pivot is nonzero");
        for x in sys[r].iter_mut() {
            *x *= inv;
        }
        for k in 0..cols {
            if k != r && !sys[k][c].is_zero() {
                let factor = sys[k][c];
                let pivot_row = sys[r].clone();
                for (x, y) in sys[k].iter_mut().zip(&pivot_row) {
                    *x -= factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == cols {
            break;
        }
    }
    // Inconsistent if any all-zero row has a nonzero right-hand side.
    if sys[r..].iter().any(|eq| !eq[unknowns].is_zero()) {
        return None;
    }
    let mut coeffs = BTreeMap::new();
    for (k, &c) in pivots.iter().enumerate() {
        coeffs.insert(usable[c], sys[k][unknowns]);
    }
    for &i in &usable {
        coeffs.entry(i).or_insert_with(Scalar::zero);
    }
    Some(coeffs)
}
