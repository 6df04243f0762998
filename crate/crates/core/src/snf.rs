//! Smith normal form and ranks of sparse integer matrices.
//!
//! The eliminator works row-major with a column occupancy index, picks pivots
//! from the sparsest active column (minimal |entry|, then minimal fill), and
//! runs on i128 with a magnitude guard, falling back to arbitrary precision
//! if entries grow past the guard.

use crate::error::{KhError, Result};
use crate::matrix::SparseIntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

/// Invariant factors d1 | d2 | ... | d_rank of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithNormalForm {
    /// The factors greater than 1 (the torsion part of the cokernel).
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| **d > BigInt::from(1))
            .cloned()
            .collect()
    }
}

/// Magnitude guard for the fast integer path.
const I128_LIMIT: i128 = 1 << 62;

trait Entry: Clone + PartialEq + Sized {
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    /// Quotient rounded to nearest, so |self - q*p| <= |p|/2.
    fn div_round(&self, p: &Self) -> Self;
    /// self - q*v, or None if the result exceeds the representation guard.
    fn sub_mul(&self, q: &Self, v: &Self) -> Option<Self>;
}

impl Entry for i128 {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        let x: i128 = v.try_into().ok()?;
        (x.abs() <= I128_LIMIT).then_some(x)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        self.abs() == 1
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn div_round(&self, p: &Self) -> Self {
        let mut q = self / p;
        let r = self - q * p;
        if 2 * r.abs() > p.abs() {
            q += (r.signum()) * (p.signum());
        }
        q
    }
    fn sub_mul(&self, q: &Self, v: &Self) -> Option<Self> {
        // |q| <= guard+1 and |v| <= guard, so the i128 arithmetic is exact
        let r = self - q * v;
        (r.abs() <= I128_LIMIT).then_some(r)
    }
}

impl Entry for BigInt {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs() == BigInt::from(1)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn div_round(&self, p: &Self) -> Self {
        let (mut q, r) = self.div_rem(p);
        if BigInt::from(2) * r.abs() > p.abs() {
            q += r.signum() * p.signum();
        }
        q
    }
    fn sub_mul(&self, q: &Self, v: &Self) -> Option<Self> {
        Some(self - q * v)
    }
}

struct Work<T> {
    rows: Vec<HashMap<u32, T>>,
    cols: Vec<HashSet<u32>>,
    heap: BinaryHeap<Reverse<(usize, u32)>>,
}

impl<T: Entry> Work<T> {
    fn build(m: &SparseIntMatrix) -> Option<Self> {
        let mut rows: Vec<HashMap<u32, T>> = vec![HashMap::new(); m.rows()];
        let mut cols: Vec<HashSet<u32>> = vec![HashSet::new(); m.cols()];
        for (r, c, v) in m.entries() {
            rows[r].insert(c as u32, T::from_bigint(v)?);
            cols[c].insert(r as u32);
        }
        let mut heap = BinaryHeap::new();
        for (c, occ) in cols.iter().enumerate() {
            if !occ.is_empty() {
                heap.push(Reverse((occ.len(), c as u32)));
            }
        }
        Some(Work { rows, cols, heap })
    }

    fn set(&mut self, r: u32, c: u32, v: T) {
        if v.is_zero() {
            if self.rows[r as usize].remove(&c).is_some() {
                self.cols[c as usize].remove(&r);
                let len = self.cols[c as usize].len();
                if len > 0 {
                    self.heap.push(Reverse((len, c)));
                }
            }
        } else {
            if self.rows[r as usize].insert(c, v).is_none() {
                self.cols[c as usize].insert(r);
                self.heap.push(Reverse((self.cols[c as usize].len(), c)));
            }
        }
    }

    /// row_dst -= q * row_src
    fn row_sub_mul(&mut self, dst: u32, src: u32, q: &T) -> Option<()> {
        let src_row: Vec<(u32, T)> = self.rows[src as usize]
            .iter()
            .map(|(&c, v)| (c, v.clone()))
            .collect();
        for (c, v) in src_row {
            let old = self.rows[dst as usize].remove(&c);
            let had = old.is_some();
            let new = match old {
                Some(e) => e.sub_mul(q, &v)?,
                None => T::from_bigint(&BigInt::zero()).unwrap().sub_mul(q, &v)?,
            };
            if new.is_zero() {
                if had {
                    self.cols[c as usize].remove(&dst);
                    let len = self.cols[c as usize].len();
                    if len > 0 {
                        self.heap.push(Reverse((len, c)));
                    }
                }
            } else {
                self.rows[dst as usize].insert(c, new);
                if !had {
                    self.cols[c as usize].insert(dst);
                    self.heap.push(Reverse((self.cols[c as usize].len(), c)));
                }
            }
        }
        Some(())
    }

    fn pick_column(&mut self) -> Option<u32> {
        loop {
            while let Some(Reverse((len, c))) = self.heap.pop() {
                let actual = self.cols[c as usize].len();
                if actual == 0 {
                    continue;
                }
                if actual != len {
                    self.heap.push(Reverse((actual, c)));
                    continue;
                }
                return Some(c);
            }
            // heap entries are best-effort; rescan occupancy before giving up
            let mut any = false;
            for (c, occ) in self.cols.iter().enumerate() {
                if !occ.is_empty() {
                    self.heap.push(Reverse((occ.len(), c as u32)));
                    any = true;
                }
            }
            if !any {
                return None;
            }
        }
    }

    fn revisit(&mut self, c: u32) {
        let len = self.cols[c as usize].len();
        if len > 0 {
            self.heap.push(Reverse((len, c)));
        }
    }

    /// Row in column `c` with the best pivot entry: units first, then smaller
    /// magnitude, then sparser row; deterministic tie-break on the row index.
    fn pick_row(&self, c: u32) -> u32 {
        let mut best: Option<(bool, &T, usize, u32)> = None;
        for &r in &self.cols[c as usize] {
            let v = &self.rows[r as usize][&c];
            let cand = (v.is_unit(), v, self.rows[r as usize].len(), r);
            let better = match &best {
                None => true,
                Some((bu, bv, bl, br)) => {
                    if cand.0 != *bu {
                        cand.0
                    } else if cand.1.abs_lt(bv) {
                        true
                    } else if bv.abs_lt(cand.1) {
                        false
                    } else if cand.2 != *bl {
                        cand.2 < *bl
                    } else {
                        cand.3 < *br
                    }
                }
            };
            if better {
                best = Some(cand);
            }
        }
        best.expect("column must be nonempty").3
    }
}

/// Core elimination: diagonalize and return the diagonal values (not yet in
/// divisibility order). None signals entry growth past the guard.
fn diagonalize<T: Entry>(m: &SparseIntMatrix) -> Option<Vec<BigInt>> {
    let mut w: Work<T> = Work::build(m)?;
    let mut diag = Vec::new();

    while let Some(start_col) = w.pick_column() {
        let mut pc = start_col;
        let mut pr = w.pick_row(pc);
        loop {
            // clear the pivot column with row operations
            loop {
                let others: Vec<u32> = w.cols[pc as usize]
                    .iter()
                    .copied()
                    .filter(|&r| r != pr)
                    .collect();
                if others.is_empty() {
                    break;
                }
                let p = w.rows[pr as usize][&pc].clone();
                for j in others {
                    let e = w.rows[j as usize][&pc].clone();
                    let q = e.div_round(&p);
                    if !q.is_zero() {
                        w.row_sub_mul(j, pr, &q)?;
                    }
                }
                // remainders smaller than the pivot become the new pivot
                let smaller = w.cols[pc as usize]
                    .iter()
                    .copied()
                    .filter(|&r| r != pr)
                    .min_by(|&a, &b| {
                        let va = &w.rows[a as usize][&pc];
                        let vb = &w.rows[b as usize][&pc];
                        if va.abs_lt(vb) {
                            std::cmp::Ordering::Less
                        } else if vb.abs_lt(va) {
                            std::cmp::Ordering::Greater
                        } else {
                            a.cmp(&b)
                        }
                    });
                match smaller {
                    Some(j) => pr = j,
                    None => break,
                }
            }
            // clear the pivot row; since the column holds only the pivot,
            // each column operation touches this row alone
            let p = w.rows[pr as usize][&pc].clone();
            let ks: Vec<u32> = w.rows[pr as usize]
                .keys()
                .copied()
                .filter(|&k| k != pc)
                .collect();
            if ks.is_empty() {
                break;
            }
            for k in ks {
                let e = w.rows[pr as usize][&k].clone();
                let q = e.div_round(&p);
                let rem = e.sub_mul(&q, &p)?;
                w.set(pr, k, rem);
            }
            if w.rows[pr as usize].len() == 1 {
                break;
            }
            // a remainder survived; it is strictly smaller, take it as pivot
            let next = w.rows[pr as usize]
                .iter()
                .filter(|(&k, _)| k != pc)
                .min_by(|(ka, va), (kb, vb)| {
                    if va.abs_lt(vb) {
                        std::cmp::Ordering::Less
                    } else if vb.abs_lt(va) {
                        std::cmp::Ordering::Greater
                    } else {
                        ka.cmp(kb)
                    }
                })
                .map(|(&k, _)| k)
                .expect("row has more than the pivot");
            // the abandoned column still holds the old pivot entry; make sure
            // it gets revisited
            w.revisit(pc);
            pc = next;
        }
        diag.push(w.rows[pr as usize][&pc].to_bigint().abs());
        w.set(pr, pc, T::from_bigint(&BigInt::zero()).unwrap());
    }
    Some(diag)
}

/// Redistribute a diagonal into a divisibility chain d1 | d2 | ...
fn normalize_diagonal(diag: Vec<BigInt>) -> Vec<BigInt> {
    let one = BigInt::from(1);
    let ones = diag.iter().filter(|d| **d == one).count();
    let mut rest: Vec<BigInt> = diag.into_iter().filter(|d| *d != one).collect();
    loop {
        let mut changed = false;
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                if !num_traits::Zero::is_zero(&(rest[j].clone() % &rest[i])) {
                    let g = rest[i].gcd(&rest[j]);
                    let l = &rest[i] / &g * &rest[j];
                    rest[i] = g;
                    rest[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    rest.sort();
    let mut out = vec![one; ones];
    out.extend(rest);
    out
}

/// Invariant factors of an integer matrix. Empty matrix gives an empty list.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithNormalForm {
    let diag = match diagonalize::<i128>(m) {
        Some(d) => d,
        None => diagonalize::<BigInt>(m).expect("BigInt elimination cannot overflow"),
    };
    let invariant_factors = normalize_diagonal(diag);
    SmithNormalForm {
        rank: invariant_factors.len(),
        invariant_factors,
    }
}

/// Rank over the integers.
pub fn rank_over_z(m: &SparseIntMatrix) -> usize {
    smith_normal_form(m).rank
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: p is prime and a nonzero mod p
    let mut base = a as u128 % p as u128;
    let mut exp = p - 2;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        exp >>= 1;
    }
    acc as u64
}

/// Rank over the prime field F_p.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(KhError::InvalidInput(format!("{p} is not prime")));
    }
    let pb = BigInt::from(p);
    let mut rows: Vec<HashMap<u32, u64>> = vec![HashMap::new(); m.rows()];
    let mut cols: Vec<HashSet<u32>> = vec![HashSet::new(); m.cols()];
    for (r, c, v) in m.entries() {
        let vm = ((v % &pb + &pb) % &pb).try_into().unwrap_or(0u64);
        if vm != 0 {
            rows[r].insert(c as u32, vm);
            cols[c].insert(r as u32);
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = cols
        .iter()
        .enumerate()
        .filter(|(_, occ)| !occ.is_empty())
        .map(|(c, occ)| Reverse((occ.len(), c as u32)))
        .collect();
    let mut rank = 0usize;
    loop {
        let pc = loop {
            match heap.pop() {
                None => return Ok(rank),
                Some(Reverse((len, c))) => {
                    let actual = cols[c as usize].len();
                    if actual == 0 {
                        continue;
                    }
                    if actual != len {
                        heap.push(Reverse((actual, c)));
                        continue;
                    }
                    break c;
                }
            }
        };
        let pr = *cols[pc as usize]
            .iter()
            .min_by_key(|&&r| (rows[r as usize].len(), r))
            .unwrap();
        let pivot = rows[pr as usize][&pc];
        let pivot_inv = inv_mod(pivot, p);
        let others: Vec<u32> = cols[pc as usize]
            .iter()
            .copied()
            .filter(|&r| r != pr)
            .collect();
        let src_row: Vec<(u32, u64)> = rows[pr as usize].iter().map(|(&c, &v)| (c, v)).collect();
        for j in others {
            let e = rows[j as usize][&pc];
            let factor = (e as u128 * pivot_inv as u128 % p as u128) as u64;
            for &(c, v) in &src_row {
                let sub = (factor as u128 * v as u128 % p as u128) as u64;
                let old = rows[j as usize].remove(&c);
                let had = old.is_some();
                let new = ((old.unwrap_or(0) + p) - sub) % p;
                if new != 0 {
                    rows[j as usize].insert(c, new);
                    if !had {
                        cols[c as usize].insert(j);
                        heap.push(Reverse((cols[c as usize].len(), c)));
                    }
                } else if had {
                    cols[c as usize].remove(&j);
                    let len = cols[c as usize].len();
                    if len > 0 {
                        heap.push(Reverse((len, c)));
                    }
                }
            }
        }
        // retire the pivot row and column
        let keys: Vec<u32> = rows[pr as usize].keys().copied().collect();
        for c in keys {
            cols[c as usize].remove(&pr);
            let len = cols[c as usize].len();
            if len > 0 {
                heap.push(Reverse((len, c)));
            }
        }
        rows[pr as usize].clear();
        rank += 1;
    }
}
