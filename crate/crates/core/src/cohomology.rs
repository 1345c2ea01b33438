//! Cochains `C^n(g_-, g) = Lambda^n(g_-)^* (x) g`, the differential, Kostant's
//! codifferential, the Laplacian and Hodge theory.
//!
//! A cochain stores its values on strictly increasing tuples of `g_-` basis
//! indices. A basis cochain `(I, c)` sends `X_I` to `b_c` and has homogeneity
//! `deg(b_c) - sum(deg X_i)`; every operator here preserves homogeneity, so all
//! matrices are assembled and solved one homogeneity block at a time.
//!
//! The differential is
//!
//! ```text
//! (d phi)(X_0..X_n) = sum_i (-1)^i [X_i, phi(..^X_i..)]
//!                   + sum_{i<j} (-1)^{i+j} phi([X_i, X_j], ..^X_i..^X_j..)
//! ```
//!
//! and `d*` is its adjoint for the inner product induced by the positive
//! definite form `-B(x, theta y)`, under which `g_i^*` is identified with
//! `g_{-i}` through the Killing form.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::Element;
use crate::error::{Error, FormatError, Result};
use crate::grading::Grading;
use crate::linalg::Matrix;
use crate::par;
use crate::rational::{self, Q};

pub const MAX_ARITY: usize = 3;

/// Key of a basis cochain: increasing argument tuple and target index.
pub type CochainKey = (Vec<usize>, usize);

#[derive(Clone, Debug)]
pub struct Cochain {
    grading: Arc<Grading>,
    arity: usize,
    entries: BTreeMap<CochainKey, Q>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.entries == other.entries
    }
}

impl Eq for Cochain {}

/// Sign of the permutation sorting `args`, with the sorted tuple; `None` on repeats.
fn sort_with_sign(args: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = args.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

impl Cochain {
    pub fn zero(grading: &Arc<Grading>, arity: usize) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityOutOfRange(arity));
        }
        Ok(Self {
            grading: grading.clone(),
            arity,
            entries: BTreeMap::new(),
        })
    }

    /// Build from `(arguments, target, value)` triples. Arguments may come in any
    /// order; they are sorted with the alternating sign and accumulated.
    pub fn from_entries<I>(grading: &Arc<Grading>, arity: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, usize, Q)>,
    {
        let mut c = Self::zero(grading, arity)?;
        let dim = grading.dim();
        for (args, target, v) in entries {
            if args.len() != arity {
                return Err(
                    FormatError::Shape(format!("cochain of arity {arity} given {} arguments", args.len())).into(),
                );
            }
            if target >= dim || args.iter().any(|&a| a >= dim || grading.degree(a) >= 0) {
                return Err(FormatError::Shape(format!("bad cochain entry {args:?} -> {target}")).into());
            }
            let Some((sorted, odd)) = sort_with_sign(&args) else {
                return Err(FormatError::Shape(format!("repeated argument in {args:?}")).into());
            };
            c.add_entry(sorted, target, if odd { -v } else { v });
        }
        Ok(c)
    }

    fn add_entry(&mut self, args: Vec<usize>, target: usize, v: Q) {
        if v.is_zero() {
            return;
        }
        let key = (args, target);
        let slot = self.entries.entry(key.clone()).or_insert_with(Q::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    /// An element of `g` viewed as a 0-cochain.
    pub fn from_element(grading: &Arc<Grading>, x: &Element) -> Self {
        Self {
            grading: grading.clone(),
            arity: 0,
            entries: x.support().map(|(i, v)| ((vec![], i), v.clone())).collect(),
        }
    }

    pub fn grading(&self) -> &Arc<Grading> {
        &self.grading
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &BTreeMap<CochainKey, Q> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self {
            grading: self.grading.clone(),
            arity: self.arity,
            entries: BTreeMap::new(),
        };
        if !s.is_zero() {
            out.entries = self.entries.iter().map(|(k, v)| (k.clone(), v * s)).collect();
        }
        out
    }

    /// Homogeneity of a basis cochain.
    pub fn key_homogeneity(grading: &Grading, args: &[usize], target: usize) -> i32 {
        grading.degree(target) - args.iter().map(|&a| grading.degree(a)).sum::<i32>()
    }

    /// Value on basis arguments given in any order.
    pub fn eval_basis(&self, args: &[usize]) -> Element {
        let mut out = self.grading.algebra().zero();
        let Some((sorted, odd)) = sort_with_sign(args) else {
            return out;
        };
        let lo = (sorted.clone(), 0);
        let hi = (sorted.clone(), usize::MAX);
        for ((_, t), v) in self.entries.range(lo..=hi) {
            if odd {
                out.coeffs[*t] -= v;
            } else {
                out.coeffs[*t] += v;
            }
        }
        out
    }

    /// Multilinear evaluation; only the `g_-` coordinates of the arguments are used.
    pub fn eval(&self, args: &[Element]) -> Element {
        assert_eq!(args.len(), self.arity, "cochain arity");
        if self.arity == 0 {
            return self.eval_basis(&[]);
        }
        let gm = self.grading.gminus();
        let mut out = self.grading.algebra().zero();
        let choices: Vec<Vec<(usize, Q)>> = args
            .iter()
            .map(|x| {
                gm.iter()
                    .filter(|&&i| !x.coeffs[i].is_zero())
                    .map(|&i| (i, x.coeffs[i].clone()))
                    .collect()
            })
            .collect();
        for combo in choices.iter().multi_cartesian_product() {
            let idx: Vec<usize> = combo.iter().map(|(i, _)| *i).collect();
            let w = combo.iter().fold(Q::one(), |acc, (_, c)| acc * c);
            let v = self.eval_basis(&idx);
            out += &v.scale(&w);
        }
        out
    }

    pub fn homogeneity_components(&self) -> BTreeMap<i32, Cochain> {
        let mut out: BTreeMap<i32, Cochain> = BTreeMap::new();
        for ((args, t), v) in &self.entries {
            let l = Self::key_homogeneity(&self.grading, args, *t);
            out.entry(l)
                .or_insert_with(|| Cochain {
                    grading: self.grading.clone(),
                    arity: self.arity,
                    entries: BTreeMap::new(),
                })
                .entries
                .insert((args.clone(), *t), v.clone());
        }
        out
    }

    /// Homogeneity-`l` component.
    pub fn component(&self, l: i32) -> Cochain {
        self.filter(|args, t| Self::key_homogeneity(&self.grading, args, t) == l)
    }

    pub fn is_homogeneous(&self, l: i32) -> bool {
        self.entries
            .keys()
            .all(|(a, t)| Self::key_homogeneity(&self.grading, a, *t) == l)
    }

    /// Keep the entries whose target degree satisfies `pred`.
    pub fn target_part(&self, pred: impl Fn(i32) -> bool) -> Cochain {
        self.filter(|_, t| pred(self.grading.degree(t)))
    }

    /// Keep the entries whose arguments all satisfy `pred` on their degrees.
    pub fn argument_part(&self, pred: impl Fn(&[i32]) -> bool) -> Cochain {
        self.filter(|args, _| {
            let d: Vec<i32> = args.iter().map(|&a| self.grading.degree(a)).collect();
            pred(&d)
        })
    }

    pub fn filter(&self, keep: impl Fn(&[usize], usize) -> bool) -> Cochain {
        Cochain {
            grading: self.grading.clone(),
            arity: self.arity,
            entries: self
                .entries
                .iter()
                .filter(|((a, t), _)| keep(a, *t))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    fn combine(&self, other: &Cochain, sign: bool) -> Cochain {
        assert_eq!(self.arity, other.arity, "cochain arity mismatch");
        let mut out = self.clone();
        for ((a, t), v) in &other.entries {
            out.add_entry(a.clone(), *t, if sign { v.clone() } else { -v.clone() });
        }
        out
    }

    pub fn to_json(&self) -> CochainJson {
        CochainJson {
            arity: self.arity,
            entries: self
                .entries
                .iter()
                .map(|((args, t), v)| {
                    let mut row: Vec<Value> = args.iter().map(|&a| Value::from(a)).collect();
                    row.push(Value::from(*t));
                    row.push(Value::from(rational::to_string(v)));
                    row
                })
                .collect(),
        }
    }

    pub fn from_json(grading: &Arc<Grading>, doc: &CochainJson) -> Result<Self> {
        let n = doc.arity;
        let mut triples = Vec::with_capacity(doc.entries.len());
        for row in &doc.entries {
            if row.len() != n + 2 {
                return Err(FormatError::Shape(format!("cochain row of length {}", row.len())).into());
            }
            let idx: Vec<usize> = row[..=n]
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| FormatError::Shape(format!("bad index {v}")))
                })
                .collect::<std::result::Result<_, _>>()?;
            let val = row[n + 1]
                .as_str()
                .ok_or_else(|| FormatError::Rational(row[n + 1].to_string()))?;
            triples.push((idx[..n].to_vec(), idx[n], rational::parse(val)?));
        }
        Self::from_entries(grading, n, triples)
    }
}

impl Add for &Cochain {
    type Output = Cochain;
    fn add(self, rhs: &Cochain) -> Cochain {
        self.combine(rhs, true)
    }
}

impl Sub for &Cochain {
    type Output = Cochain;
    fn sub(self, rhs: &Cochain) -> Cochain {
        self.combine(rhs, false)
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        self.scale(&-Q::one())
    }
}

/// `{arity, entries: [[i_1, .., i_n, target, "p/q"], ..]}` with global basis indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainJson {
    pub arity: usize,
    pub entries: Vec<Vec<Value>>,
}

/// Basis of `C^n` split into homogeneity blocks.
#[derive(Debug)]
pub struct CochainSpace {
    pub arity: usize,
    pub basis: Vec<CochainKey>,
    index: HashMap<CochainKey, usize>,
    pub blocks: BTreeMap<i32, Vec<usize>>,
    /// Position of each basis element inside its block.
    position: Vec<usize>,
    homogeneity: Vec<i32>,
}

impl CochainSpace {
    fn new(grading: &Grading, arity: usize) -> Self {
        let gm = grading.gminus();
        let mut basis = Vec::new();
        for tuple in gm.iter().copied().sorted().combinations(arity) {
            for t in 0..grading.dim() {
                basis.push((tuple.clone(), t));
            }
        }
        let homogeneity: Vec<i32> = basis
            .iter()
            .map(|(a, t)| Cochain::key_homogeneity(grading, a, *t))
            .collect();
        let mut blocks: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        let mut position = vec![0; basis.len()];
        for (i, &l) in homogeneity.iter().enumerate() {
            let b = blocks.entry(l).or_default();
            position[i] = b.len();
            b.push(i);
        }
        let index = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Self {
            arity,
            basis,
            index,
            blocks,
            position,
            homogeneity,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn block_dim(&self, l: i32) -> usize {
        self.blocks.get(&l).map_or(0, Vec::len)
    }

    pub fn homogeneities(&self) -> Vec<i32> {
        self.blocks.keys().copied().collect()
    }

    fn block_vector(&self, c: &Cochain, l: i32) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.block_dim(l)];
        for (k, x) in &c.entries {
            let i = self.index[k];
            if self.homogeneity[i] == l {
                v[self.position[i]] = x.clone();
            }
        }
        v
    }

    fn write_block(&self, out: &mut Cochain, l: i32, v: &[Q]) {
        if let Some(b) = self.blocks.get(&l) {
            for (&i, x) in b.iter().zip(v) {
                if !x.is_zero() {
                    let (a, t) = &self.basis[i];
                    out.add_entry(a.clone(), *t, x.clone());
                }
            }
        }
    }
}

/// Dimensions and ranks of one homogeneity block of `C^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRanks {
    pub homogeneity: i32,
    pub dim: usize,
    pub rank_d: usize,
    pub rank_dstar: usize,
    pub harmonic: usize,
}

impl BlockRanks {
    pub fn is_direct_sum(&self) -> bool {
        self.rank_d + self.rank_dstar + self.harmonic == self.dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeParts {
    /// Part in the image of `d`.
    pub exact: Cochain,
    pub harmonic: Cochain,
    /// Part in the image of `d*`.
    pub coexact: Cochain,
}

type Blocks = BTreeMap<i32, Matrix>;

struct LaplaceBlock {
    laplacian: Matrix,
    /// Columns span `im d`, `ker box`, `im d*`, in this order.
    stacked: Matrix,
    widths: [usize; 3],
}

/// The complex `C^0 -> C^1 -> C^2 -> C^3` of a grading with cached block matrices.
pub struct CochainComplex {
    grading: Arc<Grading>,
    theta: Matrix,
    theta_inv: Matrix,
    /// `1 / theta(X_i, X_i)` for `g_-` basis vectors, which are theta-orthogonal.
    dual_weight: HashMap<usize, Q>,
    /// Brackets inside `g_-`: for each `m`, the pairs `p < q` with `[X_p, X_q]` containing `X_m`.
    pairs_into: HashMap<usize, Vec<(usize, usize, Q)>>,
    spaces: [OnceLock<CochainSpace>; MAX_ARITY + 1],
    d: [OnceLock<Blocks>; MAX_ARITY],
    dstar: [OnceLock<Blocks>; MAX_ARITY],
    laplace: [OnceLock<BTreeMap<i32, LaplaceBlock>>; MAX_ARITY],
}

impl CochainComplex {
    pub fn new(grading: Arc<Grading>) -> Self {
        let g = grading.algebra();
        let theta = g.theta_gram();
        let theta_inv = theta.inverse().expect("theta form is definite");
        let gm = grading.gminus();
        let dual_weight = gm.iter().map(|&i| (i, theta[(i, i)].recip())).collect();
        let mut pairs_into: HashMap<usize, Vec<(usize, usize, Q)>> = HashMap::new();
        let mut sorted = gm.clone();
        sorted.sort_unstable();
        for (a, &p) in sorted.iter().enumerate() {
            for &q in &sorted[a + 1..] {
                for (m, v) in g.structure_constants(p, q) {
                    pairs_into.entry(*m).or_default().push((p, q, v.clone()));
                }
            }
        }
        Self {
            grading,
            theta,
            theta_inv,
            dual_weight,
            pairs_into,
            spaces: Default::default(),
            d: Default::default(),
            dstar: Default::default(),
            laplace: Default::default(),
        }
    }

    pub fn grading(&self) -> &Arc<Grading> {
        &self.grading
    }

    pub fn space(&self, n: usize) -> Result<&CochainSpace> {
        if n > MAX_ARITY {
            return Err(Error::ArityOutOfRange(n));
        }
        Ok(self.spaces[n].get_or_init(|| CochainSpace::new(&self.grading, n)))
    }

    fn check(&self, c: &Cochain) -> Result<()> {
        if !Arc::ptr_eq(&self.grading, &c.grading) && c.grading.dims() != self.grading.dims() {
            return Err(Error::GradingMismatch("cochain belongs to another grading".into()));
        }
        Ok(())
    }

    /// `d` of the basis cochain `(I, c)`, as sparse entries of `C^{n+1}`.
    fn d_basis(&self, args: &[usize], target: usize) -> Vec<(CochainKey, Q)> {
        let g = self.grading.algebra();
        let mut out = Vec::new();
        for &x in &self.grading.gminus() {
            if args.contains(&x) {
                continue;
            }
            let pos = args.iter().filter(|&&a| a < x).count();
            let mut j = args.to_vec();
            j.insert(pos, x);
            for (t, v) in g.structure_constants(x, target) {
                let v = if pos % 2 == 1 { -v.clone() } else { v.clone() };
                out.push(((j.clone(), *t), v));
            }
        }
        for (tpos, &m) in args.iter().enumerate() {
            let rest: Vec<usize> = args.iter().copied().filter(|&a| a != m).collect();
            for (p, q, a) in self.pairs_into.get(&m).into_iter().flatten() {
                if rest.contains(p) || rest.contains(q) {
                    continue;
                }
                let mut j = rest.clone();
                j.push(*p);
                j.push(*q);
                j.sort_unstable();
                let ip = j.iter().position(|x| x == p).unwrap();
                let iq = j.iter().position(|x| x == q).unwrap();
                let v = if (ip + iq + tpos) % 2 == 1 {
                    -a.clone()
                } else {
                    a.clone()
                };
                out.push(((j, target), v));
            }
        }
        out
    }

    /// Block matrices of `d: C^n -> C^{n+1}`.
    fn d_blocks(&self, n: usize) -> Result<&Blocks> {
        if n >= MAX_ARITY {
            return Err(Error::ArityOutOfRange(n + 1));
        }
        let src = self.space(n)?;
        let dst = self.space(n + 1)?;
        Ok(self.d[n].get_or_init(|| {
            let cols = par::map(&src.basis, |(a, t)| self.d_basis(a, *t));
            let mut blocks: Blocks = src
                .blocks
                .iter()
                .map(|(&l, b)| (l, Matrix::zeros(dst.block_dim(l), b.len())))
                .collect();
            for (i, col) in cols.into_iter().enumerate() {
                let l = src.homogeneity[i];
                let m = blocks.get_mut(&l).unwrap();
                for (key, v) in col {
                    let r = dst.index[&key];
                    debug_assert_eq!(dst.homogeneity[r], l);
                    m[(dst.position[r], src.position[i])] += v;
                }
            }
            blocks
        }))
    }

    /// Gram matrix of the cochain inner product on block `l` of `C^n`, or its inverse.
    fn gram_block(&self, n: usize, l: i32, inverse: bool) -> Matrix {
        let sp = self.space(n).expect("arity checked");
        let idx = sp.blocks.get(&l).map_or(&[][..], Vec::as_slice);
        let base = if inverse { &self.theta_inv } else { &self.theta };
        let mut m = Matrix::zeros(idx.len(), idx.len());
        for (r, &i) in idx.iter().enumerate() {
            let (a, t) = &sp.basis[i];
            let w = a.iter().fold(Q::one(), |acc, x| acc * &self.dual_weight[x]);
            let w = if inverse { w.recip() } else { w };
            for (c, &j) in idx.iter().enumerate() {
                let (b, u) = &sp.basis[j];
                if a == b && !base[(*t, *u)].is_zero() {
                    m[(r, c)] = &w * &base[(*t, *u)];
                }
            }
        }
        m
    }

    /// Block matrices of `d*: C^n -> C^{n-1}`.
    fn dstar_blocks(&self, n: usize) -> Result<&Blocks> {
        if n == 0 || n > MAX_ARITY {
            return Err(Error::ArityOutOfRange(n));
        }
        let d = self.d_blocks(n - 1)?;
        Ok(self.dstar[n - 1].get_or_init(|| {
            let ls: Vec<i32> = d.keys().copied().collect();
            let mats = par::map(&ls, |&l| {
                let ginv = self.gram_block(n - 1, l, true);
                let g = self.gram_block(n, l, false);
                ginv.mul(&d[&l].transpose()).mul(&g)
            });
            let mut blocks: Blocks = ls.into_iter().zip(mats).collect();
            // homogeneities present in C^n but not in C^{n-1}
            for (&l, b) in &self.space(n).unwrap().blocks {
                blocks.entry(l).or_insert_with(|| Matrix::zeros(0, b.len()));
            }
            blocks
        }))
    }

    fn apply(&self, c: &Cochain, from: usize, to: usize, blocks: &Blocks) -> Result<Cochain> {
        self.check(c)?;
        let src = self.space(from)?;
        let dst = self.space(to)?;
        let mut out = Cochain::zero(&self.grading, to)?;
        for l in c.homogeneity_components().keys() {
            let v = src.block_vector(c, *l);
            let w = blocks[l].mul_vec(&v);
            dst.write_block(&mut out, *l, &w);
        }
        Ok(out)
    }

    pub fn differential(&self, c: &Cochain) -> Result<Cochain> {
        let n = c.arity;
        let blocks = self.d_blocks(n)?;
        self.apply(c, n, n + 1, blocks)
    }

    pub fn codifferential(&self, c: &Cochain) -> Result<Cochain> {
        let n = c.arity;
        let blocks = self.dstar_blocks(n)?;
        self.apply(c, n, n - 1, blocks)
    }

    /// Inner product `<a, b>` induced by `-B(x, theta y)`.
    pub fn pairing(&self, a: &Cochain, b: &Cochain) -> Result<Q> {
        self.check(a)?;
        self.check(b)?;
        if a.arity != b.arity {
            return Err(Error::ArityOutOfRange(b.arity));
        }
        let mut acc = Q::zero();
        for ((args, t), x) in &a.entries {
            let w = args.iter().fold(Q::one(), |acc, i| acc * &self.dual_weight[i]);
            for u in 0..self.grading.dim() {
                let g = &self.theta[(*t, u)];
                if g.is_zero() {
                    continue;
                }
                if let Some(y) = b.entries.get(&(args.clone(), u)) {
                    acc += &w * g * x * y;
                }
            }
        }
        Ok(acc)
    }

    fn laplace_blocks(&self, n: usize) -> Result<&BTreeMap<i32, LaplaceBlock>> {
        if n >= MAX_ARITY {
            return Err(Error::ArityOutOfRange(n));
        }
        let d_up = self.d_blocks(n)?;
        let ds_up = self.dstar_blocks(n + 1)?;
        let (d_down, ds_down) = if n > 0 {
            (Some(self.d_blocks(n - 1)?), Some(self.dstar_blocks(n)?))
        } else {
            (None, None)
        };
        let sp = self.space(n)?;
        Ok(self.laplace[n].get_or_init(|| {
            let ls = sp.homogeneities();
            let built = par::map(&ls, |&l| {
                let dim = sp.block_dim(l);
                let up = ds_up[&l].mul(&d_up[&l]);
                let (exact, down) = match (d_down, ds_down) {
                    (Some(dd), Some(dsd)) => match dd.get(&l) {
                        Some(dm) => (dm.clone(), dm.mul(&dsd[&l])),
                        None => (Matrix::zeros(dim, 0), Matrix::zeros(dim, dim)),
                    },
                    _ => (Matrix::zeros(dim, 0), Matrix::zeros(dim, dim)),
                };
                let laplacian = up.add(&down);
                let harmonic = laplacian.kernel();
                let harm = Matrix::from_columns(dim, &harmonic);
                let coexact = ds_up[&l].clone();
                let widths = [exact.cols(), harm.cols(), coexact.cols()];
                let stacked = Matrix::hstack(&[&exact, &harm, &coexact]);
                LaplaceBlock {
                    laplacian,
                    stacked,
                    widths,
                }
            });
            ls.into_iter().zip(built).collect()
        }))
    }

    pub fn laplacian(&self, c: &Cochain) -> Result<Cochain> {
        let n = c.arity;
        let lb = self.laplace_blocks(n)?;
        let blocks: Blocks = lb.iter().map(|(l, b)| (*l, b.laplacian.clone())).collect();
        self.apply(c, n, n, &blocks)
    }

    /// Ranks of `d` into and `d*` into each block of `C^n`, with `dim ker box`.
    pub fn block_ranks(&self, n: usize) -> Result<Vec<BlockRanks>> {
        let lb = self.laplace_blocks(n)?;
        let sp = self.space(n)?;
        let ls = sp.homogeneities();
        Ok(par::map(&ls, |&l| {
            let b = &lb[&l];
            let [we, wh, ws] = b.widths;
            let all: Vec<usize> = (0..we).collect();
            let co: Vec<usize> = (we + wh..we + wh + ws).collect();
            let rows: Vec<usize> = (0..sp.block_dim(l)).collect();
            BlockRanks {
                homogeneity: l,
                dim: sp.block_dim(l),
                rank_d: b.stacked.submatrix(&rows, &all).rank(),
                rank_dstar: b.stacked.submatrix(&rows, &co).rank(),
                harmonic: wh,
            }
        }))
    }

    pub fn hodge_decompose(&self, c: &Cochain) -> Result<HodgeParts> {
        self.check(c)?;
        let n = c.arity;
        let lb = self.laplace_blocks(n)?;
        let sp = self.space(n)?;
        let mut parts = [
            Cochain::zero(&self.grading, n)?,
            Cochain::zero(&self.grading, n)?,
            Cochain::zero(&self.grading, n)?,
        ];
        for l in c.homogeneity_components().keys() {
            let b = &lb[l];
            let v = sp.block_vector(c, *l);
            let x = b.stacked.solve(&v).ok_or_else(|| Error::HodgeFailure {
                arity: n,
                homogeneity: *l,
                detail: "cochain outside im d + ker box + im d*".into(),
            })?;
            let mut off = 0;
            for (p, &w) in parts.iter_mut().zip(&b.widths) {
                let idx: Vec<usize> = (off..off + w).collect();
                let rows: Vec<usize> = (0..v.len()).collect();
                let y = b.stacked.submatrix(&rows, &idx).mul_vec(&x[off..off + w]);
                sp.write_block(p, *l, &y);
                off += w;
            }
        }
        let [exact, harmonic, coexact] = parts;
        Ok(HodgeParts {
            exact,
            harmonic,
            coexact,
        })
    }

    /// Check the direct sum `C^n = im d + ker box + im d*` in every block.
    pub fn verify_hodge(&self, n: usize) -> Result<Vec<BlockRanks>> {
        let ranks = self.block_ranks(n)?;
        for r in &ranks {
            if !r.is_direct_sum() {
                return Err(Error::HodgeFailure {
                    arity: n,
                    homogeneity: r.homogeneity,
                    detail: format!(
                        "rank d {} + rank d* {} + harmonic {} != {}",
                        r.rank_d, r.rank_dstar, r.harmonic, r.dim
                    ),
                });
            }
        }
        Ok(ranks)
    }

    /// The solution of `box x = c` orthogonal to the harmonic cochains.
    pub fn laplacian_inverse(&self, c: &Cochain) -> Result<Cochain> {
        self.check(c)?;
        let n = c.arity;
        let lb = self.laplace_blocks(n)?;
        let sp = self.space(n)?;
        let mut out = Cochain::zero(&self.grading, n)?;
        for l in c.homogeneity_components().keys() {
            let v = sp.block_vector(c, *l);
            let x = lb[l].laplacian.solve(&v).ok_or(Error::NotInLaplacianImage {
                arity: n,
                homogeneity: *l,
            })?;
            sp.write_block(&mut out, *l, &x);
        }
        let h = self.hodge_decompose(&out)?;
        Ok(&out - &h.harmonic)
    }

    /// `dim H^n` per homogeneity.
    pub fn cohomology_dims(&self, n: usize) -> Result<BTreeMap<i32, usize>> {
        let up = self.d_blocks(n)?;
        let down = if n > 0 { Some(self.d_blocks(n - 1)?) } else { None };
        let sp = self.space(n)?;
        let ls = sp.homogeneities();
        let dims = par::map(&ls, |&l| {
            let kernel = sp.block_dim(l) - up[&l].rank();
            let image = down.and_then(|d| d.get(&l)).map_or(0, Matrix::rank);
            kernel - image
        });
        Ok(ls.into_iter().zip(dims).collect())
    }

    /// True iff `H^1` vanishes in every homogeneity `>= 1`.
    pub fn check_h1_condition(&self) -> Result<bool> {
        Ok(self.cohomology_dims(1)?.iter().all(|(&l, &d)| l < 1 || d == 0))
    }
}
