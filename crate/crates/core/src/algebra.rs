//! Split simple Lie algebras in a Chevalley basis.
//!
//! Basis order: the simple coroots `h_1..h_r` first, then root vectors sorted
//! by height (negative roots first) and, within one height, by coefficient
//! vector with larger leading coefficient first. Brackets are
//!
//! * `[h_i, e_a] = <a, alpha_i^vee> e_a`
//! * `[e_a, e_{-a}] = h_a`, the coroot of `a` written in simple coroots
//! * `[e_a, e_b] = N(a, b) e_{a+b}` with the extraspecial sign convention of
//!   [`crate::roots`].

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, FormatError, Result};
use crate::linalg::Matrix;
use crate::rational::{self, Q};
use crate::roots::{CartanType, Root, RootSystem};

/// A vector of `g` in the algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub coeffs: Vec<Q>,
}

impl Element {
    pub fn zero(dim: usize) -> Self {
        Self {
            coeffs: vec![Q::zero(); dim],
        }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coeffs[i] = Q::one();
        e
    }

    pub fn from_coeffs(coeffs: Vec<Q>) -> Self {
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Keep only the coordinates listed in `indices`.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let mut out = Self::zero(self.dim());
        for &i in indices {
            out.coeffs[i] = self.coeffs[i].clone();
        }
        out
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        assert_eq!(self.dim(), rhs.dim(), "element dimension");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        assert_eq!(self.dim(), rhs.dim(), "element dimension");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&Element> for &Q {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        rhs.scale(self)
    }
}

/// What a basis vector is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisVector {
    Coroot(usize),
    RootVector(Root),
}

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    cartan_type: CartanType,
    roots: RootSystem,
    basis: Vec<BasisVector>,
    labels: Vec<String>,
    /// `table[i * dim + j]` is the sparse expansion of `[b_i, b_j]`.
    table: Vec<Vec<(usize, Q)>>,
    killing: Matrix,
}

/// Construct the split simple Lie algebra of the given type in its Chevalley basis.
pub fn build_algebra(series: char, rank: usize) -> Result<LieAlgebra> {
    let ct = CartanType::new(series, rank)?;
    Ok(LieAlgebra::new(ct))
}

impl LieAlgebra {
    pub fn new(cartan_type: CartanType) -> Self {
        let roots = RootSystem::new(cartan_type);
        let r = cartan_type.rank;
        let mut basis: Vec<BasisVector> = (0..r).map(BasisVector::Coroot).collect();
        basis.extend(roots.roots.iter().cloned().map(BasisVector::RootVector));
        let dim = basis.len();
        let labels = basis.iter().map(label).collect();

        let n = roots.structure_constants();
        let root_base = r;
        let mut table = vec![Vec::new(); dim * dim];
        for (ai, a) in roots.roots.iter().enumerate() {
            let pa = roots.pairings(a);
            for (i, p) in pa.iter().enumerate() {
                if *p != 0 {
                    let (h, e) = (i, root_base + ai);
                    table[h * dim + e] = vec![(e, rational::q(*p))];
                    table[e * dim + h] = vec![(e, rational::q(-*p))];
                }
            }
            for (bi, b) in roots.roots.iter().enumerate() {
                let sum: Root = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let (x, y) = (root_base + ai, root_base + bi);
                if sum.iter().all(|&c| c == 0) {
                    let h = roots.coroot(a);
                    table[x * dim + y] = h
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| **c != 0)
                        .map(|(i, c)| (i, rational::q(*c)))
                        .collect();
                } else if let Some(si) = roots.index_of(&sum) {
                    let v = n[&(ai, bi)];
                    table[x * dim + y] = vec![(root_base + si, rational::q(v))];
                }
            }
        }
        Self::from_parts(cartan_type, roots, basis, labels, table)
    }

    fn from_parts(
        cartan_type: CartanType,
        roots: RootSystem,
        basis: Vec<BasisVector>,
        labels: Vec<String>,
        table: Vec<Vec<(usize, Q)>>,
    ) -> Self {
        let dim = basis.len();
        let mut alg = Self {
            cartan_type,
            roots,
            basis,
            labels,
            table,
            killing: Matrix::zeros(dim, dim),
        };
        // tr(ad b_i ad b_j) = sum_c <coefficient of b_c in [b_i, [b_j, b_c]]>
        let rows = crate::par::map_range(dim, |i| {
            (i..dim)
                .map(|j| {
                    let mut acc = Q::zero();
                    for c in 0..dim {
                        for (d, x) in &alg.table[j * dim + c] {
                            for (e, y) in &alg.table[i * dim + d] {
                                if *e == c {
                                    acc += x * y;
                                }
                            }
                        }
                    }
                    acc
                })
                .collect::<Vec<Q>>()
        });
        let mut killing = Matrix::zeros(dim, dim);
        for (i, row) in rows.into_iter().enumerate() {
            for (off, v) in row.into_iter().enumerate() {
                killing[(i, i + off)] = v.clone();
                killing[(i + off, i)] = v;
            }
        }
        alg.killing = killing;
        alg
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.cartan_type.cartan_matrix()
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element::basis(self.dim(), i)
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.dim())
    }

    /// Root coefficient vector of a basis vector, or `None` for a coroot.
    pub fn root_of(&self, i: usize) -> Option<&Root> {
        match &self.basis[i] {
            BasisVector::RootVector(r) => Some(r),
            BasisVector::Coroot(_) => None,
        }
    }

    /// Basis index of the root vector `e_r`.
    pub fn root_index(&self, r: &[i32]) -> Option<usize> {
        self.roots.index_of(r).map(|i| i + self.rank())
    }

    /// Sparse expansion of `[b_i, b_j]`.
    pub fn structure_constants(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i * self.dim() + j]
    }

    fn check(&self, x: &Element) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }

    pub fn try_bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bracket(x, y))
    }

    /// Lie bracket. Panics on a dimension mismatch; see [`Self::try_bracket`].
    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        assert_eq!(x.dim(), self.dim(), "element dimension");
        assert_eq!(y.dim(), self.dim(), "element dimension");
        let dim = self.dim();
        let mut out = Element::zero(dim);
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let entry = &self.table[i * dim + j];
                if entry.is_empty() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in entry {
                    out.coeffs[*k] += &ab * c;
                }
            }
        }
        out
    }

    /// Matrix of `ad x`; column `j` is `[x, b_j]`.
    pub fn ad_matrix(&self, x: &Element) -> Matrix {
        let dim = self.dim();
        let mut m = Matrix::zeros(dim, dim);
        for (i, a) in x.support() {
            for j in 0..dim {
                for (k, c) in &self.table[i * dim + j] {
                    m[(*k, j)] += a * c;
                }
            }
        }
        m
    }

    pub fn killing_matrix(&self) -> &Matrix {
        &self.killing
    }

    pub fn try_killing_form(&self, x: &Element, y: &Element) -> Result<Q> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.killing_form(x, y))
    }

    pub fn killing_form(&self, x: &Element, y: &Element) -> Q {
        let mut acc = Q::zero();
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let k = &self.killing[(i, j)];
                if !k.is_zero() {
                    acc += a * b * k;
                }
            }
        }
        acc
    }

    /// Chevalley involution `e_a -> -e_{-a}`, `h -> -h`.
    pub fn chevalley_involution(&self, x: &Element) -> Element {
        let mut out = self.zero();
        for (i, c) in x.support() {
            match &self.basis[i] {
                BasisVector::Coroot(_) => out.coeffs[i] = -c.clone(),
                BasisVector::RootVector(r) => {
                    let neg: Root = r.iter().map(|v| -v).collect();
                    let j = self.root_index(&neg).expect("negative root");
                    out.coeffs[j] = -c.clone();
                }
            }
        }
        out
    }

    /// Positive definite form `-B(x, theta y)` with `theta` the Chevalley involution.
    pub fn theta_form(&self, x: &Element, y: &Element) -> Q {
        -self.killing_form(x, &self.chevalley_involution(y))
    }

    /// Gram matrix of [`Self::theta_form`] on the basis.
    pub fn theta_gram(&self) -> Matrix {
        let dim = self.dim();
        let mut g = Matrix::zeros(dim, dim);
        for i in 0..dim {
            let ti = self.chevalley_involution(&self.basis_element(i));
            for j in 0..dim {
                g[(j, i)] = -self.killing_form(&self.basis_element(j), &ti);
            }
        }
        g
    }

    pub fn to_json(&self) -> AlgebraJson {
        let dim = self.dim();
        let mut sc = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let e = &self.table[i * dim + j];
                if !e.is_empty() {
                    sc.push(StructureEntry(
                        i,
                        j,
                        e.iter().map(|(k, c)| (*k, rational::to_string(c))).collect(),
                    ));
                }
            }
        }
        AlgebraJson {
            series: self.cartan_type.series.to_string(),
            rank: self.rank(),
            dim,
            cartan_matrix: self.cartan_matrix(),
            basis: self.labels.clone(),
            structure_constants: sc,
        }
    }

    /// Rebuild an algebra from its serialized form. The type fixes the root
    /// data; the structure constants are taken from the document.
    pub fn from_json(doc: &AlgebraJson) -> Result<Self> {
        let mut chars = doc.series.chars();
        let series = chars.next().ok_or_else(|| FormatError::Shape("empty series".into()))?;
        let ct = CartanType::new(series, doc.rank)?;
        let roots = RootSystem::new(ct);
        let r = ct.rank;
        let mut basis: Vec<BasisVector> = (0..r).map(BasisVector::Coroot).collect();
        basis.extend(roots.roots.iter().cloned().map(BasisVector::RootVector));
        let dim = basis.len();
        if doc.dim != dim || doc.basis.len() != dim {
            return Err(FormatError::Shape(format!("dimension {} does not match {ct}", doc.dim)).into());
        }
        let mut table = vec![Vec::new(); dim * dim];
        for StructureEntry(i, j, entries) in &doc.structure_constants {
            if *i >= dim || *j >= dim {
                return Err(FormatError::Shape(format!("index ({i}, {j}) out of range")).into());
            }
            let mut v = Vec::with_capacity(entries.len());
            for (k, c) in entries {
                if *k >= dim {
                    return Err(FormatError::Shape(format!("index {k} out of range")).into());
                }
                v.push((*k, rational::parse(c)?));
            }
            table[i * dim + j] = v;
        }
        Ok(Self::from_parts(ct, roots, basis, doc.basis.clone(), table))
    }
}

fn label(b: &BasisVector) -> String {
    match b {
        BasisVector::Coroot(i) => format!("h{}", i + 1),
        BasisVector::RootVector(r) => {
            let body: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            format!("e[{}]", body.join(","))
        }
    }
}

/// `[i, j, [[k, "p/q"], ...]]`: the expansion of `[b_i, b_j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureEntry(pub usize, pub usize, pub Vec<(usize, String)>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub series: String,
    pub rank: usize,
    pub dim: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub basis: Vec<String>,
    pub structure_constants: Vec<StructureEntry>,
}
