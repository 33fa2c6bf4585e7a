//! Exact rank, kernel and row selection for sparse integer matrices.
//!
//! A pass modulo a 61-bit prime picks a candidate set of independent rows.
//! Those rows are reduced exactly (fraction-free, `i128` first and `BigInt`
//! on overflow), and every input row is then checked exactly against the
//! resulting kernel. Rows that fail are added and the exact pass repeats,
//! so the result never depends on the prime.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Q;

/// Sparse row: `(column, value)` with strictly increasing columns and no zeros.
pub(crate) type IntRow = Vec<(usize, BigInt)>;

/// Integer matrix entry: either a machine integer or a big one.
pub(crate) trait Entry {
    fn small(&self) -> Option<i128>;
    fn big(&self) -> BigInt;
}

impl Entry for i64 {
    fn small(&self) -> Option<i128> {
        Some(*self as i128)
    }
    fn big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn small(&self) -> Option<i128> {
        self.to_i128().filter(|x| x.unsigned_abs() < 1 << 100)
    }
    fn big(&self) -> BigInt {
        self.clone()
    }
}

/// Rows produced on demand, so very tall systems need not be materialised.
pub(crate) trait Rows {
    type E: Entry;
    fn count(&self) -> usize;
    /// Sparse row with increasing columns and no zero entries.
    fn row(&self, i: usize) -> Vec<(usize, Self::E)>;
}

impl<E: Entry + Clone> Rows for Vec<Vec<(usize, E)>> {
    type E = E;
    fn count(&self) -> usize {
        self.len()
    }
    fn row(&self, i: usize) -> Vec<(usize, E)> {
        self[i].clone()
    }
}

pub(crate) struct Reduced {
    #[allow(dead_code)]
    pub rank: usize,
    /// Indices of input rows forming a basis of the row space.
    pub selected: Vec<usize>,
    /// Kernel basis, one vector per non-pivot column.
    pub kernel: Vec<(usize, Vec<Q>)>,
}

/// Build a sparse row from possibly unsorted, possibly repeated entries.
pub(crate) fn sparse_row(entries: impl IntoIterator<Item = (usize, i64)>) -> Vec<(usize, i64)> {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for (c, v) in entries {
        *acc.entry(c).or_insert(0) += v;
    }
    acc.into_iter().filter(|&(_, v)| v != 0).collect()
}

pub(crate) fn reduce<R: Rows>(rows: &R, ncols: usize) -> Reduced {
    let mut candidates = select_mod_p(rows, ncols);
    loop {
        let chosen: Vec<Vec<(usize, R::E)>> = candidates.iter().map(|&i| rows.row(i)).collect();
        let (basis, independent) = match gauss_jordan::<i128, R::E>(&chosen) {
            Some(r) => r,
            None => gauss_jordan::<BigInt, R::E>(&chosen).expect("big integers do not overflow"),
        };
        let selected: Vec<usize> = candidates.iter().zip(&independent).filter(|(_, &ok)| ok).map(|(&i, _)| i).collect();
        let kernel = kernel_of(&basis, ncols);
        let failing = failing_rows(rows, &kernel);
        if failing.is_empty() {
            return Reduced { rank: basis.len(), selected, kernel };
        }
        let mut next: BTreeSet<usize> = selected.into_iter().collect();
        next.extend(failing);
        candidates = next.into_iter().collect();
    }
}

// ---------------------------------------------------------------------------
// modular selection

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

fn to_mod<E: Entry>(v: &E) -> u64 {
    match v.small() {
        Some(x) => x.rem_euclid(P as i128) as u64,
        None => v.big().mod_floor(&BigInt::from(P)).to_u64().expect("residue fits"),
    }
}

/// Rows that each shrink the kernel modulo `P`; they are independent over Q.
fn select_mod_p<R: Rows>(rows: &R, ncols: usize) -> Vec<usize> {
    let mut basis: Vec<Vec<u64>> = (0..ncols)
        .map(|i| {
            let mut e = vec![0; ncols];
            e[i] = 1;
            e
        })
        .collect();
    let mut out = Vec::new();
    for idx in 0..rows.count() {
        if basis.is_empty() {
            break;
        }
        let r: Vec<(usize, u64)> = rows.row(idx).iter().map(|(c, v)| (*c, to_mod(v))).collect();
        let mut s: Vec<u64> =
            basis.iter().map(|b| r.iter().fold(0, |acc, &(c, v)| addmod(acc, mulmod(v, b[c])))).collect();
        let Some(p) = s.iter().rposition(|&x| x != 0) else { continue };
        let inv = powmod(s[p], P - 2);
        let pivot = basis.swap_remove(p);
        s.swap_remove(p);
        for (b, &sj) in basis.iter_mut().zip(&s) {
            if sj == 0 {
                continue;
            }
            let f = mulmod(sj, inv);
            for (x, &y) in b.iter_mut().zip(&pivot) {
                if y != 0 {
                    *x = submod(*x, mulmod(f, y));
                }
            }
        }
        out.push(idx);
    }
    out
}

// ---------------------------------------------------------------------------
// exact fraction-free reduction

trait Ring: Clone + PartialEq + Sized {
    fn from_entry<E: Entry>(v: &E) -> Option<Self>;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// `a * x - b * y`
    fn lin(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(a: &Self, b: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_unit(&self) -> bool;
    fn to_big(&self) -> BigInt;
}

impl Ring for i128 {
    fn from_entry<E: Entry>(v: &E) -> Option<Self> {
        v.small().filter(|x| x.unsigned_abs() < 1 << 100)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128().filter(|x| x.unsigned_abs() < 1 << 100)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn lin(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd(a: &Self, b: &Self) -> Self {
        Integer::gcd(a, b)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ring for BigInt {
    fn from_entry<E: Entry>(v: &E) -> Option<Self> {
        Some(v.big())
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn lin(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd(a: &Self, b: &Self) -> Self {
        Integer::gcd(a, b)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type Row<R> = Vec<(usize, R)>;

/// `a * r - b * s`
fn combine<R: Ring>(r: &Row<R>, a: &R, s: &Row<R>, b: &R) -> Option<Row<R>> {
    let zero = R::from_big(&BigInt::zero())?;
    let mut out = Vec::with_capacity(r.len() + s.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < s.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = s.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, R::lin(a, &r[i - 1].1, b, &zero)?)
        } else if cj < ci {
            j += 1;
            (cj, R::lin(a, &zero, b, &s[j - 1].1)?)
        } else {
            i += 1;
            j += 1;
            (ci, R::lin(a, &r[i - 1].1, b, &s[j - 1].1)?)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    Some(out)
}

fn make_primitive<R: Ring>(row: &mut Row<R>) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.clone();
    for (_, v) in row.iter().skip(1) {
        if g.is_unit() {
            return;
        }
        g = R::gcd(&g, v);
    }
    if !g.is_unit() && !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
}

fn value_at<R: Ring>(row: &Row<R>, col: usize) -> Option<&R> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

/// Reduced rows keyed by pivot column, plus which inputs were independent.
/// `None` when the integer type overflows.
#[allow(clippy::type_complexity)]
fn gauss_jordan<R: Ring, E: Entry>(rows: &[Vec<(usize, E)>]) -> Option<(Vec<(usize, Row<BigInt>)>, Vec<bool>)> {
    let mut basis: Vec<(usize, Row<R>)> = Vec::new();
    let mut pivot_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut independent = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r: Row<R> = row.iter().map(|(c, v)| Some((*c, R::from_entry(v)?))).collect::<Option<_>>()?;
        while let Some((c, v)) = r.iter().find(|(c, _)| pivot_of.contains_key(c)).cloned() {
            let (pc, prow) = &basis[pivot_of[&c]];
            let pv = value_at(prow, *pc).expect("pivot entry present");
            let g = R::gcd(pv, &v);
            r = combine(&r, &pv.div_exact(&g), prow, &v.div_exact(&g))?;
            make_primitive(&mut r);
        }
        let Some((c, rv)) = r.first().cloned() else {
            independent.push(false);
            continue;
        };
        for (_, brow) in basis.iter_mut() {
            if let Some(w) = value_at(brow, c).cloned() {
                let g = R::gcd(&rv, &w);
                *brow = combine(brow, &rv.div_exact(&g), &r, &w.div_exact(&g))?;
                make_primitive(brow);
            }
        }
        pivot_of.insert(c, basis.len());
        basis.push((c, r));
        independent.push(true);
    }
    let out = basis.into_iter().map(|(c, row)| (c, row.into_iter().map(|(k, v)| (k, v.to_big())).collect())).collect();
    Some((out, independent))
}

fn kernel_of(basis: &[(usize, Row<BigInt>)], ncols: usize) -> Vec<(usize, Vec<Q>)> {
    let pivots: BTreeSet<usize> = basis.iter().map(|(c, _)| *c).collect();
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[f] = Q::one();
        for (pc, row) in basis {
            if let Some(a) = value_at(row, f) {
                let p = value_at(row, *pc).expect("pivot entry present");
                v[*pc] = -Q::new(a.clone(), p.clone());
            }
        }
        out.push((f, v));
    }
    out
}

/// Input rows that do not annihilate every kernel vector.
fn failing_rows<R: Rows>(rows: &R, kernel: &[(usize, Vec<Q>)]) -> Vec<usize> {
    if kernel.is_empty() {
        return Vec::new();
    }
    let ints: Vec<Vec<BigInt>> = kernel
        .iter()
        .map(|(_, v)| {
            let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            v.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    let small: Option<Vec<Vec<i128>>> = ints
        .iter()
        .map(|v| v.iter().map(|x| x.to_i128().filter(|y| y.unsigned_abs() < 1 << 60)).collect())
        .collect();
    let mut failing = Vec::new();
    for i in 0..rows.count() {
        let row = rows.row(i);
        let small_row: Option<Vec<(usize, i128)>> =
            row.iter().map(|(c, v)| v.small().filter(|y| y.unsigned_abs() < 1 << 60).map(|y| (*c, y))).collect();
        let ok = match (&small, small_row) {
            (Some(ks), Some(r)) if r.len() < 64 => {
                ks.iter().all(|k| r.iter().fold(0i128, |acc, &(c, v)| acc + v * k[c]) == 0)
            }
            _ => ints.iter().all(|k| Zero::is_zero(&row.iter().fold(BigInt::zero(), |acc, (c, v)| acc + v.big() * &k[*c]))),
        };
        if !ok {
            failing.push(i);
        }
    }
    failing
}

/// Exact solution of `A v = b` with free unknowns set to zero, or `None`
/// if the system is inconsistent. Rows of `a` are sparse integer rows over
/// `ncols` unknowns.
pub(crate) fn solve(a: &[Vec<(usize, i64)>], b: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let aug: Vec<IntRow> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let d = rhs.denom().clone();
            let mut r: IntRow = row.iter().map(|(c, v)| (*c, BigInt::from(*v) * &d)).collect();
            if !rhs.is_zero() {
                r.push((ncols, -rhs.numer().clone()));
            }
            r
        })
        .collect();
    let red = reduce(&aug, ncols + 1);
    let (_, v) = red.kernel.into_iter().find(|(f, _)| *f == ncols)?;
    Some(v[..ncols].to_vec())
}
