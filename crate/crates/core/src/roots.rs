//! Root systems of the simple Lie algebras and Chevalley structure constants.
//!
//! Simple roots are numbered as in Bourbaki. Roots are stored as integer
//! coefficient vectors in the basis of simple roots. The structure constants
//! `N(a, b)` with `[e_a, e_b] = N(a, b) e_{a+b}` are fixed by declaring every
//! extraspecial pair positive, where positive roots are totally ordered by
//! height and then by coefficient vector, larger leading coefficient first.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Dynkin type of a simple Lie algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub series: char,
    pub rank: usize,
}

impl CartanType {
    pub fn new(series: char, rank: usize) -> Result<Self> {
        let series = series.to_ascii_uppercase();
        let ok = match series {
            'A' => rank >= 1,
            'B' | 'C' => rank >= 2,
            'D' => rank >= 4,
            'E' => (6..=8).contains(&rank),
            'F' => rank == 4,
            'G' => rank == 2,
            _ => false,
        };
        if ok {
            Ok(Self { series, rank })
        } else {
            Err(Error::InvalidType { series, rank })
        }
    }

    /// Gram matrix `(alpha_i, alpha_j)` of the simple roots, short roots of
    /// squared length 2.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut s = vec![vec![0i64; n]; n];
        let link = |s: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            s[i][j] = v;
            s[j][i] = v;
        };
        match self.series {
            'A' => {
                for i in 0..n {
                    s[i][i] = 2;
                }
                for i in 0..n.saturating_sub(1) {
                    link(&mut s, i, i + 1, -1);
                }
            }
            'B' => {
                for i in 0..n {
                    s[i][i] = if i + 1 < n { 4 } else { 2 };
                }
                for i in 0..n - 1 {
                    link(&mut s, i, i + 1, -2);
                }
            }
            'C' => {
                for i in 0..n {
                    s[i][i] = if i + 1 < n { 2 } else { 4 };
                }
                for i in 0..n - 1 {
                    link(&mut s, i, i + 1, if i + 2 < n { -1 } else { -2 });
                }
            }
            'D' => {
                for i in 0..n {
                    s[i][i] = 2;
                }
                for i in 0..n - 2 {
                    link(&mut s, i, i + 1, -1);
                }
                link(&mut s, n - 3, n - 1, -1);
            }
            'E' => {
                for i in 0..n {
                    s[i][i] = 2;
                }
                link(&mut s, 0, 2, -1);
                link(&mut s, 1, 3, -1);
                for i in 2..n - 1 {
                    link(&mut s, i, i + 1, -1);
                }
            }
            'F' => {
                s[0][0] = 4;
                s[1][1] = 4;
                s[2][2] = 2;
                s[3][3] = 2;
                link(&mut s, 0, 1, -2);
                link(&mut s, 1, 2, -2);
                link(&mut s, 2, 3, -1);
            }
            'G' => {
                s[0][0] = 2;
                s[1][1] = 6;
                link(&mut s, 0, 1, -3);
            }
            _ => unreachable!("validated in CartanType::new"),
        }
        s
    }

    /// Cartan matrix `A[i][j] = <alpha_j, alpha_i^vee> = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let s = self.gram();
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| 2 * s[i][j] / s[i][i]).collect())
            .collect()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

pub type Root = Vec<i32>;

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub gram: Vec<Vec<i64>>,
    /// All roots: negative roots first (most negative height first), then
    /// positive roots in increasing order.
    pub roots: Vec<Root>,
    index: HashMap<Root, usize>,
}

pub fn height(r: &[i32]) -> i32 {
    r.iter().sum()
}

fn order_key(r: &[i32]) -> (i32, Vec<std::cmp::Reverse<i32>>) {
    (height(r), r.iter().map(|&c| std::cmp::Reverse(c)).collect())
}

impl RootSystem {
    pub fn new(cartan_type: CartanType) -> Self {
        let gram = cartan_type.gram();
        let n = cartan_type.rank;
        let simple: Vec<Root> = (0..n).map(|i| (0..n).map(|j| i32::from(i == j)).collect()).collect();
        let ip = |a: &[i32], b: &[i32]| -> i64 {
            let mut acc = 0;
            for i in 0..n {
                for j in 0..n {
                    acc += a[i] as i64 * b[j] as i64 * gram[i][j];
                }
            }
            acc
        };

        // Grow positive roots by height using root strings.
        let mut positive: Vec<Root> = simple.clone();
        let mut layer = simple.clone();
        while !layer.is_empty() {
            let mut next: Vec<Root> = Vec::new();
            for beta in &layer {
                for (i, a) in simple.iter().enumerate() {
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if positive.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing = 2 * ip(beta, a) / gram[i][i];
                    let q = p - pairing;
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            positive.extend(next.iter().cloned());
            layer = next;
        }
        positive.sort_by_key(|r| order_key(r));

        let mut roots: Vec<Root> = positive.iter().rev().map(|r| r.iter().map(|c| -c).collect()).collect();
        // Negative roots: most negative height first, ties in positive order.
        roots.sort_by_key(|r: &Root| {
            let neg: Vec<i32> = r.iter().map(|c| -c).collect();
            (height(r), order_key(&neg).1)
        });
        roots.extend(positive);
        let index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        Self {
            cartan_type,
            gram,
            roots,
            index,
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn index_of(&self, r: &[i32]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &[i32]) -> bool {
        self.index.contains_key(r)
    }

    pub fn positive(&self) -> &[Root] {
        &self.roots[self.roots.len() / 2..]
    }

    pub fn inner(&self, a: &[i32], b: &[i32]) -> i64 {
        let n = self.rank();
        let mut acc = 0;
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                acc += a[i] as i64 * b[j] as i64 * self.gram[i][j];
            }
        }
        acc
    }

    /// Largest `p` with `b - p a` a root.
    pub fn string_down(&self, a: &[i32], b: &[i32]) -> i64 {
        let mut p = 0;
        let mut cur: Root = b.to_vec();
        loop {
            for (c, x) in cur.iter_mut().zip(a) {
                *c -= x;
            }
            if self.is_root(&cur) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    /// Coefficients of the coroot `2 a / (a, a)` in the basis of simple coroots.
    pub fn coroot(&self, a: &[i32]) -> Vec<i64> {
        let aa = self.inner(a, a);
        (0..self.rank())
            .map(|i| {
                let num = a[i] as i64 * self.gram[i][i];
                debug_assert_eq!(num % aa, 0);
                num / aa
            })
            .collect()
    }

    /// `<a, alpha_i^vee>` for every simple coroot.
    pub fn pairings(&self, a: &[i32]) -> Vec<i64> {
        (0..self.rank())
            .map(|i| {
                let mut e = vec![0; self.rank()];
                e[i] = 1;
                2 * self.inner(a, &e) / self.gram[i][i]
            })
            .collect()
    }

    /// Structure constants `N(a, b)` for every ordered pair of roots whose sum
    /// is a root, keyed by root indices.
    pub fn structure_constants(&self) -> HashMap<(usize, usize), i64> {
        let pos: Vec<Root> = self.positive().to_vec();
        let pos_rank: HashMap<&Root, usize> = pos.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let add = |a: &[i32], b: &[i32]| -> Root { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        let neg = |a: &[i32]| -> Root { a.iter().map(|x| -x).collect() };
        let is_pos = |a: &[i32]| height(a) > 0;

        // Constants on pairs of positive roots, by increasing height of the sum.
        let mut npos: HashMap<(Root, Root), i64> = HashMap::new();

        // Mixed-sign constants expressed through positive ones.
        fn mixed(
            rs: &RootSystem,
            npos: &HashMap<(Root, Root), i64>,
            x: &[i32],
            y: &[i32],
        ) -> Option<num_rational::Ratio<i64>> {
            use num_rational::Ratio;
            let s: Root = x.iter().zip(y).map(|(a, b)| a + b).collect();
            if !rs.is_root(&s) {
                return Some(Ratio::from_integer(0));
            }
            let px = height(x) > 0;
            let py = height(y) > 0;
            let negv = |a: &[i32]| -> Root { a.iter().map(|c| -c).collect() };
            match (px, py) {
                (true, true) => npos.get(&(x.to_vec(), y.to_vec())).map(|&v| Ratio::from_integer(v)),
                (false, false) => npos.get(&(negv(x), negv(y))).map(|&v| Ratio::from_integer(-v)),
                (false, true) => mixed(rs, npos, y, x).map(|v| -v),
                (true, false) => {
                    let v = negv(y);
                    let z: Root = x.iter().zip(&v).map(|(a, b)| a - b).collect();
                    if height(&z) > 0 {
                        // x = v + z
                        let n = *npos.get(&(v.clone(), z.clone()))?;
                        Some(Ratio::new(-rs.inner(&z, &z) * n, rs.inner(x, x)))
                    } else {
                        // v = x + z'
                        let zp = negv(&z);
                        let n = *npos.get(&(zp.clone(), x.to_vec()))?;
                        Some(Ratio::new(rs.inner(&zp, &zp) * n, rs.inner(&v, &v)))
                    }
                }
            }
        }

        let mut by_height: Vec<&Root> = pos.iter().filter(|r| height(r) >= 2).collect();
        by_height.sort_by_key(|r| order_key(r));
        for xi in by_height {
            let mut special: Vec<(Root, Root)> = Vec::new();
            for a in &pos {
                let b: Root = xi.iter().zip(a).map(|(x, y)| x - y).collect();
                if is_pos(&b) && self.is_root(&b) && pos_rank[a] < pos_rank[&b] {
                    special.push((a.clone(), b));
                }
            }
            special.sort_by_key(|(a, _)| pos_rank[a]);
            let (g0, d0) = special[0].clone();
            let p0 = self.string_down(&g0, &d0);
            npos.insert((g0.clone(), d0.clone()), p0 + 1);
            npos.insert((d0.clone(), g0.clone()), -(p0 + 1));
            let xx = self.inner(xi, xi);
            for (a, b) in special.iter().skip(1) {
                use num_rational::Ratio;
                let mg0 = neg(&g0);
                let md0 = neg(&d0);
                let mut acc = Ratio::from_integer(0i64);
                let bg = add(b, &mg0);
                if self.is_root(&bg) {
                    let t = mixed(self, &npos, b, &mg0).expect("lower height")
                        * mixed(self, &npos, a, &md0).expect("lower height");
                    acc += t / Ratio::from_integer(self.inner(&bg, &bg));
                }
                let ag = add(a, &mg0);
                if self.is_root(&ag) {
                    let t = mixed(self, &npos, &mg0, a).expect("lower height")
                        * mixed(self, &npos, b, &md0).expect("lower height");
                    acc += t / Ratio::from_integer(self.inner(&ag, &ag));
                }
                let val = acc * Ratio::new(xx, p0 + 1);
                assert!(val.is_integer(), "non-integral structure constant");
                let v = val.to_integer();
                assert_eq!(v.abs(), self.string_down(a, b) + 1, "structure constant magnitude");
                npos.insert((a.clone(), b.clone()), v);
                npos.insert((b.clone(), a.clone()), -v);
            }
        }

        let mut out = HashMap::new();
        for (i, x) in self.roots.iter().enumerate() {
            for (j, y) in self.roots.iter().enumerate() {
                let s = add(x, y);
                if !self.is_root(&s) {
                    continue;
                }
                let v = mixed(self, &npos, x, y).expect("all constants determined");
                assert!(v.is_integer(), "non-integral structure constant");
                out.insert((i, j), v.to_integer());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(series: char, rank: usize) -> usize {
        RootSystem::new(CartanType::new(series, rank).unwrap()).roots.len()
    }

    #[test]
    fn root_counts() {
        assert_eq!(count('A', 1), 2);
        assert_eq!(count('A', 2), 6);
        assert_eq!(count('A', 3), 12);
        assert_eq!(count('B', 2), 8);
        assert_eq!(count('C', 3), 18);
        assert_eq!(count('D', 4), 24);
        assert_eq!(count('G', 2), 12);
        assert_eq!(count('F', 4), 48);
        assert_eq!(count('E', 6), 72);
        assert_eq!(count('E', 8), 240);
    }

    #[test]
    fn invalid_types() {
        assert!(CartanType::new('B', 1).is_err());
        assert!(CartanType::new('D', 3).is_err());
        assert!(CartanType::new('E', 5).is_err());
        assert!(CartanType::new('X', 2).is_err());
        assert!(CartanType::new('G', 3).is_err());
    }

    #[test]
    fn cartan_matrices() {
        let b2 = CartanType::new('B', 2).unwrap().cartan_matrix();
        assert_eq!(b2, vec![vec![2, -1], vec![-2, 2]]);
        let g2 = CartanType::new('G', 2).unwrap().cartan_matrix();
        assert_eq!(g2, vec![vec![2, -3], vec![-1, 2]]);
    }

    #[test]
    fn ordering_is_height_then_leading_coefficient() {
        let rs = RootSystem::new(CartanType::new('A', 2).unwrap());
        let want: Vec<Root> = vec![
            vec![-1, -1],
            vec![-1, 0],
            vec![0, -1],
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
        ];
        assert_eq!(rs.roots, want);
    }

    #[test]
    fn constants_have_chevalley_magnitudes() {
        for (s, r) in [('A', 3), ('B', 3), ('C', 3), ('G', 2), ('F', 4), ('D', 4)] {
            let rs = RootSystem::new(CartanType::new(s, r).unwrap());
            let n = rs.structure_constants();
            for (&(i, j), &v) in &n {
                let p = rs.string_down(&rs.roots[i], &rs.roots[j]);
                assert_eq!(v.abs(), p + 1, "{s}{r} pair {i},{j}");
            }
        }
    }
}
