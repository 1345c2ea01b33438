//! Change of Weyl structure at a single fiber.
//!
//! A change `sigma^ = sigma exp(U_1) ... exp(U_k)` acts on the splitting of a
//! tangent vector, on the Rho-tensor and on the Weyl connection by the
//! multi-index sums implemented here. Multi-indices `j = (j_1, ..., j_k)` are
//! weighted by `(-1)^{|j|} / j!` and act through
//! `ad(U_k)^{j_k} o ... o ad(U_1)^{j_1}`; `||j|| = j_1 + 2 j_2 + ... + k j_k`
//! is the degree they add.
//!
//! The oracles evaluate the same quantities from the group picture instead:
//! `exp(-ad U_k) o ... o exp(-ad U_1)` applied to the value of the Cartan
//! connection, plus the left logarithmic derivative term `Phi`.
//!
//! `nabla_xi U_m` has no meaning at a single fiber and is supplied as free data
//! `DU_m`, a linear map `g_- -> g_m`.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::Element;
use crate::cohomology::{Cochain, CochainJson};
use crate::error::{Error, FormatError, Result};
use crate::grading::{Grading, ScaleFunctional};
use crate::linalg::Matrix;
use crate::rational::{self, Q};

/// `U = (U_1, ..., U_k)` with `U_m` in `g_m`, and the derivative data `DU_m: g_- -> g_m`.
#[derive(Clone, Debug)]
pub struct UpsilonJet {
    grading: Arc<Grading>,
    upsilon: Vec<Element>,
    /// `dupsilon[m-1]` has rows indexed by `g_m` and columns by `g_-` (in [`Grading::gminus`] order).
    dupsilon: Vec<Matrix>,
}

impl PartialEq for UpsilonJet {
    fn eq(&self, other: &Self) -> bool {
        self.upsilon == other.upsilon && self.dupsilon == other.dupsilon
    }
}

impl UpsilonJet {
    pub fn new(grading: &Arc<Grading>, upsilon: Vec<Element>, dupsilon: Vec<Matrix>) -> Result<Self> {
        let k = grading.k();
        if upsilon.len() != k || dupsilon.len() != k {
            return Err(Error::GradingMismatch(format!("jet needs {k} components")));
        }
        let ncols = grading.gminus().len();
        for (m, (u, du)) in upsilon.iter().zip(&dupsilon).enumerate() {
            let m = m as i32 + 1;
            if u.dim() != grading.dim() {
                return Err(Error::DimensionMismatch {
                    expected: grading.dim(),
                    got: u.dim(),
                });
            }
            if !grading.is_homogeneous(u, m) {
                return Err(Error::NotHomogeneous { expected: m });
            }
            if du.rows() != grading.component(m).len() || du.cols() != ncols {
                return Err(FormatError::Shape(format!("derivative data of degree {m}")).into());
            }
        }
        Ok(Self {
            grading: grading.clone(),
            upsilon,
            dupsilon,
        })
    }

    pub fn zero(grading: &Arc<Grading>) -> Self {
        let k = grading.ki();
        let n = grading.gminus().len();
        Self {
            grading: grading.clone(),
            upsilon: (1..=k).map(|_| grading.algebra().zero()).collect(),
            dupsilon: (1..=k).map(|m| Matrix::zeros(grading.component(m).len(), n)).collect(),
        }
    }

    /// A jet without derivative data.
    pub fn from_upsilon(grading: &Arc<Grading>, upsilon: Vec<Element>) -> Result<Self> {
        let z = Self::zero(grading);
        Self::new(grading, upsilon, z.dupsilon)
    }

    pub fn grading(&self) -> &Arc<Grading> {
        &self.grading
    }

    /// `U_m` for `m = 1..=k`.
    pub fn upsilon(&self, m: usize) -> &Element {
        &self.upsilon[m - 1]
    }

    pub fn upsilons(&self) -> &[Element] {
        &self.upsilon
    }

    pub fn dupsilon(&self, m: usize) -> &Matrix {
        &self.dupsilon[m - 1]
    }

    /// `DU_m(xi)` for `xi` in `g_-`.
    pub fn eval_dupsilon(&self, m: usize, xi: &Element) -> Element {
        let gm = self.grading.gminus();
        let v: Vec<Q> = gm.iter().map(|&i| xi.coeffs[i].clone()).collect();
        let w = self.dupsilon[m - 1].mul_vec(&v);
        let mut out = self.grading.algebra().zero();
        for (&i, x) in self.grading.component(m as i32).iter().zip(w) {
            out.coeffs[i] = x;
        }
        out
    }

    pub fn scale(&self, t: &Q) -> Self {
        Self {
            grading: self.grading.clone(),
            upsilon: self.upsilon.iter().map(|u| u.scale(t)).collect(),
            dupsilon: self.dupsilon.iter().map(|d| d.scale(t)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.upsilon.iter().all(Element::is_zero) && self.dupsilon.iter().all(Matrix::is_zero)
    }

    pub fn to_json(&self) -> UpsilonJetJson {
        let coords = |x: &Element, m: i32| -> Vec<String> {
            self.grading
                .component(m)
                .iter()
                .map(|&i| rational::to_string(&x.coeffs[i]))
                .collect()
        };
        UpsilonJetJson {
            upsilon: self
                .upsilon
                .iter()
                .enumerate()
                .map(|(m, u)| coords(u, m as i32 + 1))
                .collect(),
            dupsilon: self
                .dupsilon
                .iter()
                .map(|d| {
                    (0..d.rows())
                        .map(|r| d.row(r).iter().map(rational::to_string).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(grading: &Arc<Grading>, doc: &UpsilonJetJson) -> Result<Self> {
        let k = grading.k();
        if doc.upsilon.len() != k || doc.dupsilon.len() != k {
            return Err(FormatError::Shape(format!("jet needs {k} components")).into());
        }
        let ncols = grading.gminus().len();
        let mut ups = Vec::with_capacity(k);
        let mut dups = Vec::with_capacity(k);
        for m in 1..=grading.ki() {
            let comp = grading.component(m);
            let u = &doc.upsilon[m as usize - 1];
            if u.len() != comp.len() {
                return Err(FormatError::Shape(format!("upsilon of degree {m}")).into());
            }
            let mut x = grading.algebra().zero();
            for (&i, s) in comp.iter().zip(u) {
                x.coeffs[i] = rational::parse(s)?;
            }
            ups.push(x);
            let rows = &doc.dupsilon[m as usize - 1];
            if rows.len() != comp.len() || rows.iter().any(|r| r.len() != ncols) {
                return Err(FormatError::Shape(format!("derivative data of degree {m}")).into());
            }
            let parsed: Vec<Vec<Q>> = rows
                .iter()
                .map(|r| r.iter().map(|s| rational::parse(s)).collect())
                .collect::<std::result::Result<_, _>>()?;
            dups.push(if parsed.is_empty() {
                Matrix::zeros(0, ncols)
            } else {
                Matrix::from_rows(parsed)
            });
        }
        Self::new(grading, ups, dups)
    }
}

/// `{upsilon: [coordinates on g_m], dupsilon: [rows over g_m, columns over g_-]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpsilonJetJson {
    pub upsilon: Vec<Vec<String>>,
    pub dupsilon: Vec<Vec<Vec<String>>>,
}

/// A tangent vector split as `(xi_{-k}, ..., xi_{-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVector {
    k: usize,
    components: Vec<Element>,
}

impl GradedVector {
    /// Split `x` in `g_-` into its homogeneous components.
    pub fn from_element(grading: &Grading, x: &Element) -> Result<Self> {
        if !x.support().all(|(i, _)| grading.degree(i) < 0) {
            return Err(Error::GradingMismatch("vector has components outside g_-".into()));
        }
        Ok(Self {
            k: grading.k(),
            components: (-grading.ki()..0).map(|l| grading.project(x, l)).collect(),
        })
    }

    pub fn from_components(grading: &Grading, components: Vec<Element>) -> Result<Self> {
        if components.len() != grading.k() {
            return Err(Error::GradingMismatch("wrong number of components".into()));
        }
        for (l, c) in (-grading.ki()..0).zip(&components) {
            if !grading.is_homogeneous(c, l) {
                return Err(Error::NotHomogeneous { expected: l });
            }
        }
        Ok(Self {
            k: grading.k(),
            components,
        })
    }

    /// `xi_l` for `l` in `-k..=-1`.
    pub fn component(&self, l: i32) -> &Element {
        &self.components[(l + self.k as i32) as usize]
    }

    pub fn components(&self) -> &[Element] {
        &self.components
    }

    pub fn total(&self) -> Element {
        let mut out = self.components[0].clone();
        for c in &self.components[1..] {
            out += c;
        }
        out
    }
}

/// The Rho-tensor at a point: a `p_+`-valued 1-cochain on `g_-`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoMap {
    cochain: Cochain,
}

impl RhoMap {
    pub fn new(cochain: Cochain) -> Result<Self> {
        if cochain.arity() != 1 {
            return Err(Error::ArityOutOfRange(cochain.arity()));
        }
        let g = cochain.grading();
        if cochain.entries().keys().any(|(_, t)| g.degree(*t) <= 0) {
            return Err(Error::NotInPPlus);
        }
        Ok(Self { cochain })
    }

    pub fn zero(grading: &Arc<Grading>) -> Self {
        Self {
            cochain: Cochain::zero(grading, 1).expect("arity 1"),
        }
    }

    pub fn cochain(&self) -> &Cochain {
        &self.cochain
    }

    pub fn eval(&self, xi: &Element) -> Element {
        self.cochain.eval(std::slice::from_ref(xi))
    }

    /// `P_i`, the `g_i`-valued component.
    pub fn component(&self, i: i32) -> RhoMap {
        Self {
            cochain: self.cochain.target_part(|d| d == i),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cochain.is_zero()
    }

    pub fn to_json(&self) -> CochainJson {
        self.cochain.to_json()
    }
}

/// Multi-indices `(j_1, ..., j_k)` with `||j|| = norm`, in lexicographic order.
pub fn multi_indices(k: usize, norm: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, m: usize, rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m > k {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for j in 0..=rest / m {
            cur.push(j);
            go(k, m + 1, rest - j * m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, 1, norm, &mut Vec::with_capacity(k), &mut out);
    out
}

fn multi_factorial(j: &[usize]) -> Q {
    j.iter().fold(Q::one(), |acc, &x| acc * rational::factorial(x))
}

fn sign(n: usize) -> Q {
    if n.is_even() {
        Q::one()
    } else {
        -Q::one()
    }
}

/// `ad(U_k)^{j_k} o ... o ad(U_1)^{j_1} (x)`.
fn ad_word(u: &UpsilonJet, j: &[usize], x: &Element) -> Element {
    let g = u.grading.algebra();
    let mut v = x.clone();
    for (m, &p) in j.iter().enumerate() {
        for _ in 0..p {
            if v.is_zero() {
                return v;
            }
            v = g.bracket(&u.upsilon[m], &v);
        }
    }
    v
}

/// `sum_{||j|| = norm} (-1)^{|j|}/j! ad(U_k)^{j_k} o ... o ad(U_1)^{j_1} (x)`.
fn ad_series(u: &UpsilonJet, x: &Element, norm: i32) -> Element {
    let mut out = u.grading.algebra().zero();
    if norm < 0 || x.is_zero() {
        return out;
    }
    for j in multi_indices(u.grading.k(), norm as usize) {
        let w = ad_word(u, &j, x);
        if w.is_zero() {
            continue;
        }
        let total: usize = j.iter().sum();
        out += &w.scale(&(sign(total) / multi_factorial(&j)));
    }
    out
}

/// The multi-index sum over all degrees, `sum_j (-1)^{|j|}/j! ad(U_k)^{j_k} o ... o ad(U_1)^{j_1} (x)`.
pub fn value_transform(u: &UpsilonJet, x: &Element) -> Element {
    let mut out = u.grading.algebra().zero();
    for norm in 0..=2 * u.grading.ki() {
        out += &ad_series(u, x, norm);
    }
    out
}

fn check_same(u: &UpsilonJet, g: &Grading) -> Result<()> {
    if u.grading.dims() != g.dims() || u.grading.crossed() != g.crossed() {
        return Err(Error::GradingMismatch("jet and vector use different gradings".into()));
    }
    Ok(())
}

/// The splitting of `xi` with respect to the new Weyl structure.
pub fn transform_splitting(u: &UpsilonJet, xi: &GradedVector) -> GradedVector {
    let gr = &u.grading;
    let k = gr.ki();
    let components = (-k..0)
        .map(|i| {
            let mut acc = gr.algebra().zero();
            for l in -k..=i {
                acc += &ad_series(u, xi.component(l), i - l);
            }
            acc
        })
        .collect();
    GradedVector { k: gr.k(), components }
}

/// The new Rho-tensor evaluated at `xi`, an element of `p_+`.
pub fn transform_rho(u: &UpsilonJet, p: &RhoMap, xi: &GradedVector) -> Element {
    let gr = &u.grading;
    let k = gr.ki();
    let total = xi.total();
    let pxi = p.eval(&total);
    let mut out = gr.algebra().zero();
    for i in 1..=k {
        // xi_l terms
        for l in -k..0 {
            out += &ad_series(u, xi.component(l), i - l);
        }
        // P_l(xi) terms
        for l in 1..=i {
            out += &ad_series(u, &gr.project(&pxi, l), i - l);
        }
        // derivative terms
        for m in 1..=i {
            let du = u.eval_dupsilon(m as usize, &total);
            if du.is_zero() {
                continue;
            }
            for j in multi_indices(gr.k(), (i - m) as usize) {
                if j[..m as usize - 1].iter().any(|&x| x != 0) {
                    continue;
                }
                let w = ad_word(u, &j, &du);
                if w.is_zero() {
                    continue;
                }
                let jm = j[m as usize - 1];
                let abs: usize = j.iter().sum();
                let weight = sign(abs) / (multi_factorial(&j) * rational::q(jm as i64 + 1));
                out += &w.scale(&weight);
            }
        }
    }
    out
}

/// The `g_0`-valued correction `Gamma(U, xi)` of the Weyl connection.
pub fn transform_connection(u: &UpsilonJet, xi: &GradedVector) -> Element {
    let gr = &u.grading;
    let mut out = gr.algebra().zero();
    for l in -gr.ki()..0 {
        out += &ad_series(u, xi.component(l), -l);
    }
    out
}

/// `exp(-x)` applied through the terminating series of `ad`.
fn exp_neg_ad(g: &crate::LieAlgebra, x: &Element, v: &Element) -> Element {
    let mut out = v.clone();
    let mut term = v.clone();
    let mut p = 1i64;
    loop {
        term = g.bracket(x, &term).scale(&rational::qf(-1, p));
        if term.is_zero() {
            return out;
        }
        out += &term;
        p += 1;
    }
}

/// `exp(ad(-U_k)) o ... o exp(ad(-U_1)) (v)`.
pub fn oracle_adexp(u: &UpsilonJet, v: &Element) -> Element {
    let g = u.grading.algebra();
    u.upsilon.iter().fold(v.clone(), |acc, x| exp_neg_ad(g, x, &acc))
}

/// `Phi(xi) = sum_i exp(ad(-U_k)) o ... o exp(ad(-U_{i+1})) (sum_p (-1)^p/(p+1)! ad(U_i)^p DU_i(xi))`.
pub fn oracle_phi(u: &UpsilonJet, xi: &GradedVector) -> Element {
    let g = u.grading.algebra();
    let total = xi.total();
    let mut out = g.zero();
    for i in 1..=u.grading.k() {
        let mut term = u.eval_dupsilon(i, &total);
        let mut acc = g.zero();
        let mut p = 0usize;
        while !term.is_zero() {
            acc += &term.scale(&(sign(p) / rational::factorial(p + 1)));
            term = g.bracket(&u.upsilon[i - 1], &term);
            p += 1;
        }
        for x in &u.upsilon[i..] {
            acc = exp_neg_ad(g, x, &acc);
        }
        out += &acc;
    }
    out
}

/// First-order variation of the splitting.
pub fn delta_splitting(u: &UpsilonJet, xi: &GradedVector) -> GradedVector {
    let gr = &u.grading;
    let g = gr.algebra();
    let k = gr.ki();
    let components = (-k..0)
        .map(|i| {
            let mut acc = g.zero();
            for m in 1..=k + i {
                acc -= &g.bracket(&u.upsilon[m as usize - 1], xi.component(i - m));
            }
            acc
        })
        .collect();
    GradedVector { k: gr.k(), components }
}

/// First-order variation of the Rho-tensor at `xi`.
pub fn delta_rho(u: &UpsilonJet, p: &RhoMap, xi: &GradedVector) -> Element {
    let gr = &u.grading;
    let g = gr.algebra();
    let k = gr.ki();
    let total = xi.total();
    let pxi = p.eval(&total);
    let mut out = g.zero();
    for i in 1..=k {
        out += &u.eval_dupsilon(i as usize, &total);
        for m in 1..i {
            out -= &g.bracket(&u.upsilon[m as usize - 1], &gr.project(&pxi, i - m));
        }
        for m in i + 1..=k {
            out -= &g.bracket(&u.upsilon[m as usize - 1], xi.component(i - m));
        }
    }
    out
}

/// First-order variation of the connection correction.
pub fn delta_connection(u: &UpsilonJet, xi: &GradedVector) -> Element {
    let g = u.grading.algebra();
    let mut out = g.zero();
    for m in 1..=u.grading.ki() {
        out -= &g.bracket(&u.upsilon[m as usize - 1], xi.component(-m));
    }
    out
}

/// `Upsilon^{sigma, lambda}(xi)`: the multi-index sum of degree zero, paired with `lambda'`.
pub fn upsilon_one_form(u: &UpsilonJet, l: &ScaleFunctional, xi: &GradedVector) -> Q {
    let gr = &u.grading;
    let mut acc = Q::zero();
    for lv in -gr.ki()..0 {
        let x = xi.component(lv);
        for j in multi_indices(gr.k(), (-lv) as usize) {
            let w = ad_word(u, &j, x);
            if w.is_zero() {
                continue;
            }
            let abs: usize = j.iter().sum();
            acc += sign(abs) / multi_factorial(&j) * l.eval(&w);
        }
    }
    acc
}

/// The jet of `exp(U_1)...exp(U_k) exp(V_1)...exp(V_k)`; derivative data is not composed.
pub fn compose_upsilons(u: &UpsilonJet, v: &UpsilonJet) -> Result<UpsilonJet> {
    check_same(u, &v.grading)?;
    let word: Vec<Element> = u.upsilon.iter().chain(&v.upsilon).cloned().collect();
    let z = u.grading.pplus_factorize(&word)?;
    UpsilonJet::from_upsilon(&u.grading, z)
}

/// Coefficient of `t` in a vector-valued polynomial of degree at most `degree`,
/// recovered exactly from its values at `t = 0, 1, ..., degree`.
pub fn t_linear_coefficient(degree: usize, f: impl Fn(&Q) -> Vec<Q>) -> Vec<Q> {
    // Lagrange basis derivative at 0: L_i'(0) for nodes 0..=degree.
    let nodes: Vec<Q> = (0..=degree).map(|i| rational::q(i as i64)).collect();
    let weights: Vec<Q> = (0..=degree)
        .map(|i| {
            let mut w = Q::zero();
            // d/dt prod_{j != i} (t - x_j)/(x_i - x_j) at t = 0
            for s in 0..=degree {
                if s == i {
                    continue;
                }
                let mut term = Q::one() / (&nodes[i] - &nodes[s]);
                for j in 0..=degree {
                    if j != i && j != s {
                        term *= -&nodes[j] / (&nodes[i] - &nodes[j]);
                    }
                }
                w += term;
            }
            w
        })
        .collect();
    let mut out: Option<Vec<Q>> = None;
    for (x, w) in nodes.iter().zip(&weights) {
        let v = f(x);
        let acc = out.get_or_insert_with(|| vec![Q::zero(); v.len()]);
        for (a, b) in acc.iter_mut().zip(&v) {
            *a += w * b;
        }
    }
    out.unwrap_or_default()
}

/// Polynomial degree bound in `t` of every transform at `t U`.
pub fn transform_degree_bound(grading: &Grading) -> usize {
    2 * grading.k() + 2
}
