//! Index machinery for four-, five- and adjoint indices, the `M` generator
//! matrices and the wedge/pairing algebra of adjoint objects.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{delta, Scalar};
use crate::Error;

/// Array position of the fifth direction.
pub const I5: usize = 4;

/// Canonical adjoint order as five-index pairs (position 4 is the fifth direction).
pub const ADJ_PAIRS: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

/// Adjoint positions of the pairs `(μ,5)`, indexed by `μ`.
pub const E_SLOTS: [usize; 4] = [3, 6, 8, 9];

/// Adjoint position and orientation sign of the pair `(k,l)`; `None` when `k == l`.
#[inline]
pub fn adj_index(k: usize, l: usize) -> Option<(usize, i8)> {
    if k == l || k > 4 || l > 4 {
        return None;
    }
    let (a, b, s) = if k < l { (k, l, 1) } else { (l, k, -1) };
    let idx = match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (0, 4) => 3,
        (1, 2) => 4,
        (1, 3) => 5,
        (1, 4) => 6,
        (2, 3) => 7,
        (2, 4) => 8,
        _ => 9,
    };
    Some((idx, s))
}

/// Adjoint position of a four-index pair `(μ,ν)` with `μ < ν`.
#[inline]
pub fn z_slot(mu: usize, nu: usize) -> usize {
    adj_index(mu, nu).expect("distinct indices").0
}

/// One of the ten adjoint index values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdjointIndex(u8);

impl AdjointIndex {
    /// All values in canonical order.
    pub fn all() -> impl Iterator<Item = AdjointIndex> {
        (0..10u8).map(AdjointIndex)
    }

    pub fn new(i: usize) -> Result<Self, Error> {
        if i < 10 {
            Ok(AdjointIndex(i as u8))
        } else {
            Err(Error::Index(format!("adjoint index {i} out of range")))
        }
    }

    /// From a pair written with index labels (`5` for the fifth direction).
    pub fn from_labels(k: usize, l: usize) -> Result<(Self, i8), Error> {
        let map = |x: usize| match x {
            0..=3 => Ok(x),
            5 => Ok(I5),
            _ => Err(Error::Index(format!("five-index label {x} invalid"))),
        };
        let (k, l) = (map(k)?, map(l)?);
        adj_index(k, l)
            .map(|(i, s)| (AdjointIndex(i as u8), s))
            .ok_or_else(|| Error::Index("pair with equal entries".into()))
    }

    pub fn position(self) -> usize {
        self.0 as usize
    }

    /// Pair of array positions, first < second.
    pub fn pair(self) -> (usize, usize) {
        ADJ_PAIRS[self.0 as usize]
    }

    /// Two-character label such as `"05"`.
    pub fn label(self) -> String {
        let (k, l) = self.pair();
        let f = |x: usize| if x == I5 { 5 } else { x };
        format!("{}{}", f(k), f(l))
    }

    /// True for the pairs `(μ,5)`.
    pub fn is_e(self) -> bool {
        self.pair().1 == I5
    }
}

/// Antisymmetric five-index bivector stored by its ten independent components.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Bivector5<T>(pub [T; 10]);

impl<T: Scalar> Bivector5<T> {
    pub fn zero() -> Self {
        Bivector5([T::zero(); 10])
    }

    /// Basis bivector `e_K ∧ e_L` at canonical position `i`.
    pub fn basis(i: usize) -> Self {
        let mut b = Self::zero();
        b.0[i] = T::one();
        b
    }

    /// Component `A^{KL}` for arbitrary order.
    #[inline]
    pub fn get(&self, k: usize, l: usize) -> T {
        match adj_index(k, l) {
            Some((i, 1)) => self.0[i],
            Some((i, _)) => -self.0[i],
            None => T::zero(),
        }
    }

    /// Sets `A^{KL}` (and thereby `A^{LK}`).
    pub fn set(&mut self, k: usize, l: usize, v: T) {
        if let Some((i, s)) = adj_index(k, l) {
            self.0[i] = if s == 1 { v } else { -v };
        }
    }

    /// Full antisymmetric 5x5 array.
    pub fn full(&self) -> [[T; 5]; 5] {
        std::array::from_fn(|k| std::array::from_fn(|l| self.get(k, l)))
    }

    /// Reads the upper triangle of a 5x5 array.
    pub fn from_full(m: &[[T; 5]; 5]) -> Self {
        Bivector5(std::array::from_fn(|i| {
            let (k, l) = ADJ_PAIRS[i];
            m[k][l]
        }))
    }

    /// ℰ-part `(A^{05},A^{15},A^{25},A^{35})` and 𝒵-part `A^{μν}`.
    pub fn split(&self) -> ([T; 4], [[T; 4]; 4]) {
        let e = std::array::from_fn(|m| self.0[E_SLOTS[m]]);
        let z = std::array::from_fn(|a| std::array::from_fn(|b| self.get(a, b)));
        (e, z)
    }

    /// Inverse of [`split`](Self::split); only the upper triangle of `z` is read.
    pub fn join(e: [T; 4], z: [[T; 4]; 4]) -> Self {
        let mut b = Self::zero();
        for m in 0..4 {
            b.0[E_SLOTS[m]] = e[m];
            for n in m + 1..4 {
                b.0[z_slot(m, n)] = z[m][n];
            }
        }
        b
    }

    /// ℰ-part only.
    #[inline]
    pub fn e_part(&self) -> [T; 4] {
        std::array::from_fn(|m| self.0[E_SLOTS[m]])
    }

    /// Bivector with the ℰ-components removed.
    pub fn z_only(&self) -> Self {
        let mut b = *self;
        for &s in &E_SLOTS {
            b.0[s] = T::zero();
        }
        b
    }

    pub fn max_abs(&self) -> T {
        crate::scalar::max_abs(&self.0)
    }
}

impl<T: Scalar> Add for Bivector5<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Bivector5(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl<T: Scalar> Sub for Bivector5<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Bivector5(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl<T: Scalar> Neg for Bivector5<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Bivector5(self.0.map(|v| -v))
    }
}

impl<T: Scalar> Mul<T> for Bivector5<T> {
    type Output = Self;
    fn mul(self, c: T) -> Self {
        Bivector5(self.0.map(|v| v * c))
    }
}

/// Five-metric in a regular basis: the four-metric block plus the fifth direction.
///
/// Raising the fifth index uses `h^{55} = κ⁻²`. The lower component `g_{55}` used
/// by the generator matrices is a separate field: [`FiveMetric::new`] sets it to
/// `κ²`, while [`FiveMetric::poincare`] sets it to zero, the value for which the
/// bivector connection coefficients close into the Poincaré algebra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiveMetric<T> {
    pub g4: [[T; 4]; 4],
    pub kappa: T,
    pub g55: T,
}

impl<T: Scalar> FiveMetric<T> {
    pub fn new(g4: [[T; 4]; 4], kappa: T) -> Self {
        FiveMetric {
            g4,
            kappa,
            g55: kappa * kappa,
        }
    }

    /// Degenerate lowering `g_{55} = 0`.
    pub fn poincare(g4: [[T; 4]; 4], kappa: T) -> Self {
        FiveMetric {
            g4,
            kappa,
            g55: T::zero(),
        }
    }

    /// `h^{55} = κ⁻²`.
    pub fn h55(&self) -> T {
        T::one() / (self.kappa * self.kappa)
    }

    /// Lower five-metric with `g_{μ5} = 0`.
    pub fn lower(&self) -> [[T; 5]; 5] {
        let mut m = [[T::zero(); 5]; 5];
        for a in 0..4 {
            for b in 0..4 {
                m[a][b] = self.g4[a][b];
            }
        }
        m[I5][I5] = self.g55;
        m
    }
}

/// `(M_{αβ})^μ_ν = δ^μ_β g_{αν} − δ^μ_α g_{βν}`; pairs containing the fifth direction give zero.
pub fn m_matrix_4<T: Scalar>(pair: AdjointIndex, g: &[[T; 4]; 4]) -> [[T; 4]; 4] {
    let (a, b) = pair.pair();
    let mut m = [[T::zero(); 4]; 4];
    if b == I5 {
        return m;
    }
    for nu in 0..4 {
        m[b][nu] += g[a][nu];
        m[a][nu] -= g[b][nu];
    }
    m
}

/// `(M_{KL})^A_B = δ^A_L g_{KB} − δ^A_K g_{LB}` with the five-metric lowering.
pub fn m_matrix_5<T: Scalar>(pair: AdjointIndex, fg: &FiveMetric<T>) -> [[T; 5]; 5] {
    let (k, l) = pair.pair();
    m_matrix_5_kl(k, l, &fg.lower())
}

fn m_matrix_5_kl<T: Scalar>(k: usize, l: usize, g: &[[T; 5]; 5]) -> [[T; 5]; 5] {
    let mut m = [[T::zero(); 5]; 5];
    for bb in 0..5 {
        m[l][bb] += g[k][bb];
        m[k][bb] -= g[l][bb];
    }
    m
}

/// `M̂` of a 𝒵-part acting on four-vectors: `(M̂)^α_β = −A^{αλ} g_{λβ}`.
#[inline]
pub fn m_hat_4<T: Scalar>(z: &[[T; 4]; 4], g: &[[T; 4]; 4]) -> [[T; 4]; 4] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| -(0..4).fold(T::zero(), |acc, l| acc + z[a][l] * g[l][b]))
    })
}

/// `M̂` of a 𝒵-part acting on five-vectors: the four-block of [`m_hat_4`], zero elsewhere.
pub fn m_hat_5<T: Scalar>(z: &[[T; 4]; 4], g: &[[T; 4]; 4]) -> [[T; 5]; 5] {
    let m4 = m_hat_4(z, g);
    let mut m = [[T::zero(); 5]; 5];
    for a in 0..4 {
        for b in 0..4 {
            m[a][b] = m4[a][b];
        }
    }
    m
}

/// Antisymmetric rank-`m` adjoint array (form or multivector), dense over `10^m` slots.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointArray<T> {
    rank: usize,
    data: Vec<T>,
}

impl<T: Scalar> AdjointArray<T> {
    pub fn zeros(rank: usize) -> Self {
        AdjointArray {
            rank,
            data: vec![T::zero(); 10usize.pow(rank as u32)],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Wraps dense data, rejecting anything that is not exactly antisymmetric.
    pub fn from_data(rank: usize, data: Vec<T>) -> Result<Self, Error> {
        if data.len() != 10usize.pow(rank as u32) {
            return Err(Error::Shape(format!(
                "rank {rank} needs {} entries, got {}",
                10usize.pow(rank as u32),
                data.len()
            )));
        }
        let out = AdjointArray { rank, data };
        let mut idx = vec![0usize; rank];
        for off in 0..out.data.len() {
            let mut r = off;
            for slot in (0..rank).rev() {
                idx[slot] = r % 10;
                r /= 10;
            }
            for a in 0..rank {
                for b in a + 1..rank {
                    let mut sw = idx.clone();
                    sw.swap(a, b);
                    if out.data[off] != -out.data[Self::offset(&sw)] {
                        return Err(Error::Precondition(
                            "adjoint array is not antisymmetric".into(),
                        ));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `c·self`.
    pub fn scaled(&self, c: T) -> Self {
        AdjointArray {
            rank: self.rank,
            data: self.data.iter().map(|&v| v * c).collect(),
        }
    }

    /// Entrywise sum; ranks must agree.
    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.rank != other.rank {
            return Err(Error::Shape(
                "adding adjoint arrays of different rank".into(),
            ));
        }
        Ok(AdjointArray {
            rank: self.rank,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    fn offset(idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * 10 + i)
    }

    pub fn get(&self, idx: &[usize]) -> T {
        self.data[Self::offset(idx)]
    }

    /// Wedge `A₁∧…∧A_m = Σ_π sgn(π) A_{π1}⊗…⊗A_{πm}`.
    pub fn wedge(factors: &[Bivector5<T>]) -> Self {
        let m = factors.len();
        let mut out = Self::zeros(m);
        for (perm, sign) in permutations(m) {
            let s = if sign > 0 { T::one() } else { -T::one() };
            for (off, v) in out.data.iter_mut().enumerate() {
                let mut r = off;
                let mut prod = s;
                for slot in (0..m).rev() {
                    prod *= factors[perm[slot]].0[r % 10];
                    r /= 10;
                }
                *v += prod;
            }
        }
        out
    }

    /// Antisymmetrizes an arbitrary array indexed by `m` adjoint slots.
    pub fn antisymmetrize(rank: usize, f: impl Fn(&[usize]) -> T) -> Self {
        let mut out = Self::zeros(rank);
        let perms = permutations(rank);
        let norm = T::one() / T::from_usize_lossy(perms.len());
        let mut idx = vec![0usize; rank];
        let mut pidx = vec![0usize; rank];
        for off in 0..out.data.len() {
            let mut r = off;
            for slot in (0..rank).rev() {
                idx[slot] = r % 10;
                r /= 10;
            }
            let mut acc = T::zero();
            for (perm, sign) in &perms {
                for s in 0..rank {
                    pidx[s] = idx[perm[s]];
                }
                let v = f(&pidx);
                acc = if *sign > 0 { acc + v } else { acc - v };
            }
            out.data[off] = acc * norm;
        }
        out
    }
}

/// `⟨N, V⟩ = Σ_{𝔄₁<…<𝔄_m} N_{𝔄₁…𝔄_m} V^{𝔄₁…𝔄_m}`.
pub fn adjoint_pair<T: Scalar>(form: &AdjointArray<T>, mv: &AdjointArray<T>) -> Result<T, Error> {
    if form.rank != mv.rank {
        return Err(Error::Shape(format!(
            "rank {} paired with rank {}",
            form.rank, mv.rank
        )));
    }
    let m = form.rank;
    let mut acc = T::zero();
    let mut idx = vec![0usize; m];
    for off in 0..form.data.len() {
        let mut r = off;
        for slot in (0..m).rev() {
            idx[slot] = r % 10;
            r /= 10;
        }
        if idx.windows(2).all(|w| w[0] < w[1]) {
            acc += form.data[off] * mv.data[off];
        }
    }
    Ok(acc)
}

/// `A ∧ B = A⊗B − B⊗A` as a 10x10 array.
pub fn adjoint_wedge<T: Scalar>(a: &Bivector5<T>, b: &Bivector5<T>) -> [[T; 10]; 10] {
    std::array::from_fn(|i| std::array::from_fn(|j| a.0[i] * b.0[j] - b.0[i] * a.0[j]))
}

/// All permutations of `0..m` with their signs.
pub fn permutations(m: usize) -> Vec<(Vec<usize>, i8)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i8)>) {
        let m = used.len();
        if cur.len() == m {
            let mut inv = 0;
            for i in 0..m {
                for j in i + 1..m {
                    if cur[i] > cur[j] {
                        inv += 1;
                    }
                }
            }
            out.push((cur.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for i in 0..m {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Matrix product of square arrays.
#[inline]
pub fn matmul<T: Scalar, const N: usize>(a: &[[T; N]; N], b: &[[T; N]; N]) -> [[T; N]; N] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..N).fold(T::zero(), |acc, k| acc + a[i][k] * b[k][j]))
    })
}

/// `[a, b] = ab − ba`.
#[inline]
pub fn matcomm<T: Scalar, const N: usize>(a: &[[T; N]; N], b: &[[T; N]; N]) -> [[T; N]; N] {
    let ab = matmul(a, b);
    let ba = matmul(b, a);
    std::array::from_fn(|i| std::array::from_fn(|j| ab[i][j] - ba[i][j]))
}

/// Residual of the Poincaré commutation relations
/// `[G_{KL},G_{MN}] = g_{KM}G_{LN} − g_{LM}G_{KN} − g_{KN}G_{LM} + g_{LN}G_{KM}`.
pub fn poincare_algebra_check<T: Scalar>(mats: &[[[T; 5]; 5]; 10], fg: &FiveMetric<T>) -> T {
    let g = fg.lower();
    let gen = |k: usize, l: usize| -> [[T; 5]; 5] {
        match adj_index(k, l) {
            Some((i, 1)) => mats[i],
            Some((i, _)) => mats[i].map(|r| r.map(|v| -v)),
            None => [[T::zero(); 5]; 5],
        }
    };
    let mut worst = T::zero();
    for p in 0..10 {
        let (k, l) = ADJ_PAIRS[p];
        for q in 0..10 {
            let (m, n) = ADJ_PAIRS[q];
            let lhs = matcomm(&mats[p], &mats[q]);
            let (gln, gkn, glm, gkm) = (gen(l, n), gen(k, n), gen(l, m), gen(k, m));
            for a in 0..5 {
                for b in 0..5 {
                    let rhs = g[k][m] * gln[a][b] - g[l][m] * gkn[a][b] - g[k][n] * glm[a][b]
                        + g[l][n] * gkm[a][b];
                    worst = worst.max((lhs[a][b] - rhs).abs());
                }
            }
        }
    }
    worst
}

/// Kronecker delta on adjoint positions, the pairing of dual bases.
pub fn adjoint_delta<T: Scalar>(a: AdjointIndex, b: AdjointIndex) -> T {
    delta(a.position(), b.position())
}

/// Matrix of a five-index endomorphism acting on bivectors in the canonical adjoint basis.
pub fn bivector_action<T: Scalar>(x: &[[T; 5]; 5]) -> [[T; 10]; 10] {
    let mut m = [[T::zero(); 10]; 10];
    for (l, &(c, d)) in ADJ_PAIRS.iter().enumerate() {
        // X(e_c∧e_d) = (X e_c)∧e_d + e_c∧(X e_d)
        for a in 0..5 {
            if let Some((k, s)) = adj_index(a, d) {
                m[k][l] += if s == 1 { x[a][c] } else { -x[a][c] };
            }
            if let Some((k, s)) = adj_index(c, a) {
                m[k][l] += if s == 1 { x[a][d] } else { -x[a][d] };
            }
        }
    }
    m
}
