//! `|k|`-gradings from crossed simple roots.
//!
//! The degree of a root vector `e_a` is the sum of the coefficients of `a` on
//! the crossed simple roots; coroots have degree zero. On top of the grading
//! this module provides the grading element, the center of `g_0`, scaling
//! elements with their functional `lambda'`, and the factorization of
//! elements of `P_+` into `exp(Z_1) ... exp(Z_k)`.
//!
//! Group elements of `P_+` are handled through their adjoint matrices, which
//! is faithful because `ad` is injective on `p_+`.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, Q};

#[derive(Clone, Debug)]
pub struct Grading {
    algebra: Arc<LieAlgebra>,
    crossed: Vec<usize>,
    k: usize,
    degree: Vec<i32>,
    /// `components[d + k]` lists the basis indices of `g_d`.
    components: Vec<Vec<usize>>,
    grading_element: Element,
}

/// Build the grading of `algebra` determined by the crossed nodes (numbered from 1).
pub fn grade(algebra: Arc<LieAlgebra>, crossed: &[usize]) -> Result<Grading> {
    Grading::new(algebra, crossed)
}

impl Grading {
    pub fn new(algebra: Arc<LieAlgebra>, crossed: &[usize]) -> Result<Self> {
        let rank = algebra.rank();
        if crossed.is_empty() {
            return Err(Error::EmptyCrossedSet);
        }
        for &c in crossed {
            if c == 0 || c > rank {
                return Err(Error::InvalidNode { node: c, rank });
            }
        }
        let mut crossed: Vec<usize> = crossed.to_vec();
        crossed.sort_unstable();
        crossed.dedup();

        let degree: Vec<i32> = (0..algebra.dim())
            .map(|i| match algebra.root_of(i) {
                Some(r) => crossed.iter().map(|&c| r[c - 1]).sum(),
                None => 0,
            })
            .collect();
        let k = degree.iter().map(|d| d.unsigned_abs() as usize).max().unwrap_or(0);
        let mut components = vec![Vec::new(); 2 * k + 1];
        for (i, &d) in degree.iter().enumerate() {
            components[(d + k as i32) as usize].push(i);
        }
        let mut g = Self {
            algebra,
            crossed,
            k,
            degree,
            components,
            grading_element: Element::zero(0),
        };
        g.check_bracket_degrees()?;
        g.check_effective()?;
        g.grading_element = g.solve_grading_element()?;
        Ok(g)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn crossed(&self) -> &[usize] {
        &self.crossed
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ki(&self) -> i32 {
        self.k as i32
    }

    pub fn degree(&self, basis_index: usize) -> i32 {
        self.degree[basis_index]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degree
    }

    /// Basis indices of `g_d` (empty outside `-k..=k`).
    pub fn component(&self, d: i32) -> &[usize] {
        let idx = d + self.k as i32;
        if idx < 0 || idx as usize >= self.components.len() {
            return &[];
        }
        &self.components[idx as usize]
    }

    /// Dimensions of `g_{-k}, ..., g_k`.
    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    /// Basis indices of `g_-`, ordered by degree from `-k` to `-1`.
    pub fn gminus(&self) -> Vec<usize> {
        (-self.ki()..0)
            .flat_map(|d| self.component(d).iter().copied())
            .collect()
    }

    /// Basis indices of `p_+ = g_1 + ... + g_k`.
    pub fn pplus(&self) -> Vec<usize> {
        (1..=self.ki())
            .flat_map(|d| self.component(d).iter().copied())
            .collect()
    }

    /// Degree-`d` part of `x`.
    pub fn project(&self, x: &Element, d: i32) -> Element {
        x.restrict(self.component(d))
    }

    /// Part of `x` in degrees `lo..=hi`.
    pub fn project_range(&self, x: &Element, lo: i32, hi: i32) -> Element {
        let idx: Vec<usize> = (lo..=hi).flat_map(|d| self.component(d).iter().copied()).collect();
        x.restrict(&idx)
    }

    /// True when every nonzero coordinate of `x` sits in degree `d`.
    pub fn is_homogeneous(&self, x: &Element, d: i32) -> bool {
        x.support().all(|(i, _)| self.degree[i] == d)
    }

    pub fn in_pplus(&self, x: &Element) -> bool {
        x.support().all(|(i, _)| self.degree[i] > 0)
    }

    pub fn grading_element(&self) -> &Element {
        &self.grading_element
    }

    fn check_bracket_degrees(&self) -> Result<()> {
        let g = &self.algebra;
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let want = self.degree[i] + self.degree[j];
                for (c, _) in g.structure_constants(i, j) {
                    if self.degree[*c] != want {
                        return Err(Error::NotEffective(format!(
                            "bracket of basis {i} and {j} leaves degree {want}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `g_-` must be generated by `g_{-1}`, and `g_0` must not be all of `g`.
    fn check_effective(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::NotEffective("g0 is the whole algebra".into()));
        }
        let g = &self.algebra;
        let gm1: Vec<Element> = self.component(-1).iter().map(|&i| g.basis_element(i)).collect();
        let mut layer = gm1.clone();
        for d in 2..=self.ki() {
            let mut next = Vec::new();
            for x in &gm1 {
                for y in &layer {
                    let z = g.bracket(x, y);
                    if !z.is_zero() {
                        next.push(z);
                    }
                }
            }
            let comp = self.component(-d);
            let cols: Vec<Vec<Q>> = next
                .iter()
                .map(|z| comp.iter().map(|&c| z.coeffs[c].clone()).collect())
                .collect();
            let rank = Matrix::from_columns(comp.len(), &cols).rank();
            if rank != comp.len() {
                return Err(Error::NotEffective(format!("g_-{d} is not generated by g_-1")));
            }
            layer = next;
        }
        Ok(())
    }

    fn solve_grading_element(&self) -> Result<Element> {
        let g = &self.algebra;
        let g0 = self.component(0);
        let dim = g.dim();
        // Unknown x in g0: [x, b] = deg(b) b for every basis vector b.
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for b in 0..dim {
            for c in 0..dim {
                let row: Vec<Q> = g0
                    .iter()
                    .map(|&a| {
                        g.structure_constants(a, b)
                            .iter()
                            .find(|(k, _)| *k == c)
                            .map_or_else(Q::zero, |(_, v)| v.clone())
                    })
                    .collect();
                let target = if b == c {
                    rational::q(self.degree[b] as i64)
                } else {
                    Q::zero()
                };
                if row.iter().all(Zero::is_zero) && target.is_zero() {
                    continue;
                }
                rows.push(row);
                rhs.push(target);
            }
        }
        let m = Matrix::from_rows(rows);
        if m.rank() != g0.len() {
            return Err(Error::NotEffective("grading element is not unique".into()));
        }
        let x = m
            .solve(&rhs)
            .ok_or_else(|| Error::NotEffective("no grading element".into()))?;
        let mut e = g.zero();
        for (a, v) in g0.iter().zip(x) {
            e.coeffs[*a] = v;
        }
        Ok(e)
    }

    /// Basis of the center of `g_0`, as elements of `g`.
    pub fn center_of_g0(&self) -> Vec<Element> {
        let g = &self.algebra;
        let g0 = self.component(0);
        let mut rows = Vec::new();
        for &b in g0 {
            for c in 0..g.dim() {
                let row: Vec<Q> = g0
                    .iter()
                    .map(|&a| {
                        g.structure_constants(a, b)
                            .iter()
                            .find(|(k, _)| *k == c)
                            .map_or_else(Q::zero, |(_, v)| v.clone())
                    })
                    .collect();
                if row.iter().any(|v| !v.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let m = if rows.is_empty() {
            Matrix::zeros(0, g0.len())
        } else {
            Matrix::from_rows(rows)
        };
        let center: Vec<Element> = m
            .kernel()
            .into_iter()
            .map(|v| {
                let mut e = g.zero();
                for (a, x) in g0.iter().zip(v) {
                    e.coeffs[*a] = x;
                }
                e
            })
            .collect();
        let n = center.len();
        let mut gram = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram[(i, j)] = g.killing_form(&center[i], &center[j]);
            }
        }
        assert_eq!(gram.rank(), n, "Killing form degenerate on z(g0)");
        center
    }

    pub fn is_central_in_g0(&self, a: &Element) -> bool {
        if !self.is_homogeneous(a, 0) {
            return false;
        }
        let g = &self.algebra;
        self.component(0)
            .iter()
            .all(|&b| g.bracket(a, &g.basis_element(b)).is_zero())
    }

    /// Joint eigenspaces of `ad z(g_0)` on `p_+`, as lists of basis indices in
    /// order of first appearance.
    pub fn central_character_spaces(&self) -> Vec<Vec<usize>> {
        let g = &self.algebra;
        let z = self.center_of_g0();
        let mut spaces: Vec<(Vec<Q>, Vec<usize>)> = Vec::new();
        for b in self.pplus() {
            let be = g.basis_element(b);
            let chi: Vec<Q> = z
                .iter()
                .map(|zj| {
                    let v = g.bracket(zj, &be);
                    let lam = v.coeffs[b].clone();
                    assert_eq!(v, be.scale(&lam), "center acts diagonally on root vectors");
                    lam
                })
                .collect();
            match spaces.iter_mut().find(|(c, _)| *c == chi) {
                Some((_, v)) => v.push(b),
                None => spaces.push((chi, vec![b])),
            }
        }
        spaces.into_iter().map(|(_, v)| v).collect()
    }

    /// Scalars by which a central element acts on each central-character space of `p_+`.
    pub fn is_scaling_element(&self, a: &Element) -> Result<ScalingReport> {
        if !self.is_central_in_g0(a) {
            return Err(Error::NotCentral);
        }
        let g = &self.algebra;
        let spaces: Vec<CentralSpace> = self
            .central_character_spaces()
            .into_iter()
            .map(|basis| {
                let b0 = basis[0];
                let scalar = g.bracket(a, &g.basis_element(b0)).coeffs[b0].clone();
                CentralSpace { basis, scalar }
            })
            .collect();
        let is_scaling = spaces.iter().all(|s| !s.scalar.is_zero());
        Ok(ScalingReport { is_scaling, spaces })
    }

    pub fn scale_functional(&self, e_lambda: &Element) -> Result<ScaleFunctional> {
        let report = self.is_scaling_element(e_lambda)?;
        if !report.is_scaling {
            return Err(Error::NotScaling);
        }
        let g = &self.algebra;
        let lambda_prime = self
            .component(0)
            .iter()
            .map(|&a| g.killing_form(e_lambda, &g.basis_element(a)))
            .collect();
        Ok(ScaleFunctional {
            e_lambda: e_lambda.clone(),
            g0_basis: self.component(0).to_vec(),
            lambda_prime,
            spaces: report.spaces,
        })
    }

    /// Matrix of `exp(ad x)` for nilpotent `ad x`.
    pub fn exp_ad(&self, x: &Element) -> Matrix {
        exp_nilpotent(&self.algebra.ad_matrix(x))
    }

    /// Adjoint matrix of `exp(w_1) exp(w_2) ... exp(w_n)`.
    pub fn pplus_expand(&self, word: &[Element]) -> Matrix {
        word.iter()
            .fold(Matrix::identity(self.dim()), |acc, w| acc.mul(&self.exp_ad(w)))
    }

    /// Write `exp(w_1) ... exp(w_n)` with `w_j` in `p_+` as `exp(Z_1) ... exp(Z_k)`,
    /// `Z_i` in `g_i`. Returns `[Z_1, ..., Z_k]`.
    pub fn pplus_factorize(&self, word: &[Element]) -> Result<Vec<Element>> {
        for w in word {
            if w.dim() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    got: w.dim(),
                });
            }
            if !self.in_pplus(w) {
                return Err(Error::NotInPPlus);
            }
        }
        self.factorize_matrix(&self.pplus_expand(word))
    }

    /// Recover `Z_1, ..., Z_k` from the adjoint matrix of `exp(Z_1) ... exp(Z_k)`
    /// by peeling off one degree shift at a time.
    pub fn factorize_matrix(&self, m: &Matrix) -> Result<Vec<Element>> {
        let g = &self.algebra;
        let dim = self.dim();
        let mut m = m.clone();
        let mut out = Vec::with_capacity(self.k);
        for i in 1..=self.ki() {
            let comp = self.component(i);
            let ads: Vec<Matrix> = comp.iter().map(|&a| g.ad_matrix(&g.basis_element(a))).collect();
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for r in 0..dim {
                for c in 0..dim {
                    if self.degree[r] - self.degree[c] != i {
                        continue;
                    }
                    rows.push(ads.iter().map(|ad| ad[(r, c)].clone()).collect::<Vec<Q>>());
                    rhs.push(m[(r, c)].clone());
                }
            }
            let sys = if rows.is_empty() {
                Matrix::zeros(0, comp.len())
            } else {
                Matrix::from_rows(rows)
            };
            let z = sys
                .solve(&rhs)
                .ok_or_else(|| Error::Precondition(format!("matrix is not in exp(p+): degree {i} block")))?;
            let mut zi = g.zero();
            for (a, v) in comp.iter().zip(z) {
                zi.coeffs[*a] = v;
            }
            m = self.exp_ad(&(-&zi)).mul(&m);
            out.push(zi);
        }
        if m != Matrix::identity(dim) {
            return Err(Error::Precondition("matrix is not in exp(p+)".into()));
        }
        Ok(out)
    }

    pub fn summary(&self) -> GradingSummary {
        let z = self.center_of_g0();
        let e = self.grading_element.clone();
        let verdict = self.is_scaling_element(&e).expect("grading element is central");
        GradingSummary {
            algebra: self.algebra.cartan_type().to_string(),
            crossed: self.crossed.clone(),
            k: self.k,
            dims: self.dims(),
            component_bases: self.components.clone(),
            grading_element: e.coeffs.iter().map(rational::to_string).collect(),
            center_dim: z.len(),
            grading_element_scalars: verdict.spaces.iter().map(|s| rational::to_string(&s.scalar)).collect(),
            grading_element_is_scaling: verdict.is_scaling,
        }
    }
}

/// `exp(n)` for a nilpotent matrix, as a terminating series.
pub fn exp_nilpotent(n: &Matrix) -> Matrix {
    let dim = n.rows();
    let mut acc = Matrix::identity(dim);
    let mut term = Matrix::identity(dim);
    for p in 1..=dim + 1 {
        term = term.mul(n).scale(&rational::qf(1, p as i64));
        if term.is_zero() {
            return acc;
        }
        acc = acc.add(&term);
    }
    panic!("exp_nilpotent: matrix is not nilpotent");
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralSpace {
    pub basis: Vec<usize>,
    pub scalar: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingReport {
    pub is_scaling: bool,
    pub spaces: Vec<CentralSpace>,
}

/// `lambda'(A) = B(E_lambda, A)` on `g_0`, with the central-character data of `E_lambda`.
#[derive(Clone, Debug)]
pub struct ScaleFunctional {
    pub e_lambda: Element,
    /// Basis indices of `g_0`, the coordinates of `lambda_prime`.
    pub g0_basis: Vec<usize>,
    pub lambda_prime: Vec<Q>,
    pub spaces: Vec<CentralSpace>,
}

impl ScaleFunctional {
    /// `lambda'` of the `g_0`-part of `a`.
    pub fn eval(&self, a: &Element) -> Q {
        self.g0_basis
            .iter()
            .zip(&self.lambda_prime)
            .fold(Q::zero(), |acc, (&i, l)| acc + &a.coeffs[i] * l)
    }

    /// `2 sum_a a_a tr(ad A | p^a)`, computed from the adjoint action directly.
    pub fn trace_formula(&self, algebra: &LieAlgebra, a: &Element) -> Q {
        let ad = algebra.ad_matrix(a);
        let two = rational::q(2);
        self.spaces.iter().fold(Q::zero(), |acc, s| {
            let tr = s.basis.iter().fold(Q::zero(), |t, &b| t + &ad[(b, b)]);
            acc + &two * &s.scalar * tr
        })
    }

    /// Rank of `Z -> (X -> lambda'([Z, X]))` from `g_i` to `g_{-i}^*`, per `i = 1..=k`,
    /// paired with `dim g_i`.
    pub fn pairing_ranks(&self, grading: &Grading) -> Vec<(usize, usize)> {
        let g = grading.algebra();
        (1..=grading.ki())
            .map(|i| {
                let pos = grading.component(i);
                let neg = grading.component(-i);
                let rows: Vec<Vec<Q>> = pos
                    .iter()
                    .map(|&z| {
                        neg.iter()
                            .map(|&x| self.eval(&g.bracket(&g.basis_element(z), &g.basis_element(x))))
                            .collect()
                    })
                    .collect();
                let m = if rows.is_empty() {
                    Matrix::zeros(0, neg.len())
                } else {
                    Matrix::from_rows(rows)
                };
                (m.rank(), pos.len())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingSummary {
    pub algebra: String,
    pub crossed: Vec<usize>,
    pub k: usize,
    pub dims: Vec<usize>,
    pub component_bases: Vec<Vec<usize>>,
    pub grading_element: Vec<String>,
    pub center_dim: usize,
    pub grading_element_scalars: Vec<String>,
    pub grading_element_is_scaling: bool,
}
