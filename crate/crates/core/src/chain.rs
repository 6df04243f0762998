//! Generators, gradings, the signed cube differential, and q-graded chain
//! complexes, including the sub/quotient split at a crossing.

use crate::braid::{
    edge_type_with_source, smooth, BraidDiagram, EdgeKind, Resolution, SmoothedState,
};
use crate::error::{KhError, Result};
use crate::matrix::SparseIntMatrix;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

/// Default cap on free crossings for cube enumeration.
pub const DEFAULT_MAX_FREE: usize = 24;

/// A cube generator: a resolution plus a circle labeling. Bit i of `labels`
/// set means circle i (in canonical order) carries v_minus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub res: Resolution,
    pub labels: u32,
}

impl Generator {
    pub fn minus_count(&self, circle_count: usize) -> u32 {
        debug_assert!(circle_count <= 32);
        self.labels.count_ones().min(circle_count as u32)
    }
}

/// Homological and quantum degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grading {
    pub h: i32,
    pub q: i32,
}

/// Normalization for grading a generator: crossing signs of the diagram the
/// generator is being read in, and whether ladder-fixed 1-smoothings count
/// toward the homological degree (they do in the ambient view, not in the
/// standalone view of a partly resolved diagram).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormContext {
    pub n_plus: i32,
    pub n_minus: i32,
    pub include_fixed_ones: bool,
}

impl NormContext {
    /// The diagram read inside its ambient all-positive braid.
    pub fn ambient(diagram: &BraidDiagram) -> Self {
        NormContext {
            n_plus: diagram.crossing_count() as i32,
            n_minus: 0,
            include_fixed_ones: true,
        }
    }

    /// The diagram read standalone, with `negatives` of its free crossings
    /// negative under the chosen orientation.
    pub fn standalone(diagram: &BraidDiagram, negatives: u32) -> Self {
        NormContext {
            n_plus: diagram.free_count() as i32 - negatives as i32,
            n_minus: negatives as i32,
            include_fixed_ones: false,
        }
    }

    pub fn writhe(&self) -> i32 {
        self.n_plus - self.n_minus
    }
}

/// Gradings of a generator under a normalization context.
pub fn grading(
    diagram: &BraidDiagram,
    ctx: NormContext,
    gen: Generator,
    state: &SmoothedState,
) -> Grading {
    let mut ones = gen.res.ones() as i32;
    if ctx.include_fixed_ones {
        ones += diagram.fixed_ones() as i32;
    }
    let h = ones - ctx.n_minus;
    let minus = gen.labels.count_ones() as i32;
    let plus = state.circle_count() as i32 - minus;
    let q = h + ctx.writhe() + (plus - minus);
    Grading { h, q }
}

/// Options controlling cube assembly.
#[derive(Debug, Clone, Copy)]
pub struct ComplexOptions {
    /// Restrict to a single q-degree.
    pub q: Option<i32>,
    /// Resource guard on free crossing count.
    pub max_free: usize,
    pub sign: SignConvention,
}

impl Default for ComplexOptions {
    fn default() -> Self {
        ComplexOptions {
            q: None,
            max_free: DEFAULT_MAX_FREE,
            sign: SignConvention::OnesBefore,
        }
    }
}

impl ComplexOptions {
    pub fn at_q(q: i32) -> Self {
        ComplexOptions {
            q: Some(q),
            ..Default::default()
        }
    }
}

/// Edge sign rule for the cube differential. Homology is independent of the
/// choice; the default is pinned by the golden tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// (-1)^(number of free 1-bits before the flipped bit)
    OnesBefore,
    /// (-1)^(number of free 1-bits after the flipped bit)
    OnesAfter,
}

impl SignConvention {
    pub fn tag(&self) -> &'static str {
        match self {
            SignConvention::OnesBefore => "ones-before",
            SignConvention::OnesAfter => "ones-after",
        }
    }

    fn sign(&self, res: Resolution, free_index: usize) -> i64 {
        let count = match self {
            SignConvention::OnesBefore => res.ones_before(free_index),
            SignConvention::OnesAfter => res.ones() - res.ones_before(free_index),
        };
        if count % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// One component of the differential along a single cube edge.
fn edge_image(
    edge: &crate::braid::CubeEdge,
    gen: Generator,
    sign: i64,
) -> Vec<(i64, Generator)> {
    let src = &edge.source;
    let tgt = &edge.target;
    let label_of = |circle: usize| (gen.labels >> circle) & 1; // 1 = v_minus

    // transport untouched labels
    let mut base: u32 = 0;
    for s in 0..src.circle_count() {
        let (a, b) = edge.src_touched;
        if s == a || s == b {
            continue;
        }
        if label_of(s) == 1 {
            base |= 1 << edge.transport(s);
        }
    }
    match edge.kind {
        EdgeKind::Merge => {
            let (sa, sb) = edge.src_touched;
            let t = edge.tgt_touched.0;
            let la = label_of(sa);
            let lb = label_of(sb);
            // v- v- -> 0; one minus -> v-; v+ v+ -> v+
            if la == 1 && lb == 1 {
                return Vec::new();
            }
            let mut labels = base;
            if la == 1 || lb == 1 {
                labels |= 1 << t;
            }
            vec![(
                sign,
                Generator {
                    res: edge.target_res,
                    labels,
                },
            )]
        }
        EdgeKind::Split => {
            let s = edge.src_touched.0;
            let (t1, t2) = edge.tgt_touched;
            debug_assert!(tgt.circle_count() > t2.max(t1));
            if label_of(s) == 1 {
                // v- -> v- (x) v-
                vec![(
                    sign,
                    Generator {
                        res: edge.target_res,
                        labels: base | (1 << t1) | (1 << t2),
                    },
                )]
            } else {
                // v+ -> v+ (x) v- + v- (x) v+
                vec![
                    (
                        sign,
                        Generator {
                            res: edge.target_res,
                            labels: base | (1 << t2),
                        },
                    ),
                    (
                        sign,
                        Generator {
                            res: edge.target_res,
                            labels: base | (1 << t1),
                        },
                    ),
                ]
            }
        }
    }
}

/// The full differential of one generator as a formal integer combination.
pub fn differential(
    diagram: &BraidDiagram,
    gen: Generator,
    sign: SignConvention,
) -> Result<Vec<(i64, Generator)>> {
    let state = smooth(diagram, gen.res);
    let mut out = Vec::new();
    for i in 0..gen.res.len() {
        if gen.res.bit(i) != 0 {
            continue;
        }
        let edge = edge_type_with_source(diagram, gen.res, i, state.clone())?;
        let s = sign.sign(gen.res, i);
        out.extend(edge_image(&edge, gen, s));
    }
    Ok(out)
}

/// Per-(h,q) bases and sparse boundary matrices of the cube of resolutions.
#[derive(Debug, Clone)]
pub struct GradedChainComplex {
    pub diagram: BraidDiagram,
    pub ctx: NormContext,
    pub sign: SignConvention,
    /// (h, q) -> ordered generator basis.
    pub bases: BTreeMap<(i32, i32), Vec<Generator>>,
    /// (h, q) -> boundary matrix into the (h+1, q) basis.
    pub boundaries: BTreeMap<(i32, i32), SparseIntMatrix>,
}

impl GradedChainComplex {
    pub fn basis(&self, h: i32, q: i32) -> &[Generator] {
        self.bases.get(&(h, q)).map_or(&[], |v| v.as_slice())
    }

    pub fn dim(&self, h: i32, q: i32) -> usize {
        self.basis(h, q).len()
    }

    pub fn total_generators(&self) -> usize {
        self.bases.values().map(|b| b.len()).sum()
    }

    pub fn q_degrees(&self) -> Vec<i32> {
        let mut qs: Vec<i32> = self.bases.keys().map(|&(_, q)| q).collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    /// d(h+1,q) * d(h,q) for every consecutive pair; all must vanish.
    pub fn check_d_squared(&self) -> Result<()> {
        for (&(h, q), d) in &self.boundaries {
            if let Some(next) = self.boundaries.get(&(h + 1, q)) {
                let prod = next.multiply(d);
                if !prod.is_zero() {
                    return Err(KhError::Internal(format!(
                        "d∘d nonzero from (h={h}, q={q})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Enumerate all generators of the cube, grouped by grading.
pub fn generators(
    diagram: &BraidDiagram,
    ctx: NormContext,
    opts: &ComplexOptions,
) -> Result<BTreeMap<(i32, i32), Vec<Generator>>> {
    let free = diagram.free_count();
    if free > opts.max_free {
        return Err(KhError::ResourceGuard {
            free,
            limit: opts.max_free,
        });
    }
    let res_count: u64 = 1u64 << free;
    let chunk: Vec<BTreeMap<(i32, i32), Vec<Generator>>> = (0..res_count)
        .into_par_iter()
        .fold(
            BTreeMap::new,
            |mut acc: BTreeMap<(i32, i32), Vec<Generator>>, bits| {
                let res = Resolution::new(bits, free);
                let state = smooth(diagram, res);
                let ncirc = state.circle_count();
                assert!(ncirc <= 32, "circle count exceeds label representation");
                let mut ones = res.ones() as i32;
                if ctx.include_fixed_ones {
                    ones += diagram.fixed_ones() as i32;
                }
                let h = ones - ctx.n_minus;
                match opts.q {
                    Some(q) => {
                        // plus - minus is forced by the target q-degree
                        let diff = q - h - ctx.writhe();
                        let total = ncirc as i32;
                        if (total + diff) % 2 == 0 && diff.abs() <= total {
                            let minus = ((total - diff) / 2) as u32;
                            for labels in subsets_with_popcount(ncirc as u32, minus) {
                                acc.entry((h, q))
                                    .or_default()
                                    .push(Generator { res, labels });
                            }
                        }
                    }
                    None => {
                        for labels in 0..(1u32 << ncirc) {
                            let minus = labels.count_ones() as i32;
                            let plus = ncirc as i32 - minus;
                            let q = h + ctx.writhe() + plus - minus;
                            acc.entry((h, q))
                                .or_default()
                                .push(Generator { res, labels });
                        }
                    }
                }
                acc
            },
        )
        .collect();
    let mut merged: BTreeMap<(i32, i32), Vec<Generator>> = BTreeMap::new();
    for part in chunk {
        for (k, mut v) in part {
            merged.entry(k).or_default().append(&mut v);
        }
    }
    for basis in merged.values_mut() {
        basis.sort_unstable();
    }
    Ok(merged)
}

/// All label bitmasks on `n` circles with exactly `k` bits set, ascending.
fn subsets_with_popcount(n: u32, k: u32) -> Vec<u32> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let limit = 1u64 << n;
    let mut v: u64 = (1u64 << k) - 1;
    while v < limit {
        out.push(v as u32);
        // next bit permutation with same popcount
        let t = v | (v - 1);
        v = (t + 1) | (((!t & (!t).wrapping_neg()) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// Assemble the q-graded chain complex of the cube of resolutions.
pub fn complex(
    diagram: &BraidDiagram,
    ctx: NormContext,
    opts: &ComplexOptions,
) -> Result<GradedChainComplex> {
    let bases = generators(diagram, ctx, opts)?;
    let index: HashMap<(i32, i32), HashMap<Generator, usize>> = bases
        .iter()
        .map(|(&k, basis)| {
            (
                k,
                basis
                    .iter()
                    .enumerate()
                    .map(|(i, &g)| (g, i))
                    .collect::<HashMap<_, _>>(),
            )
        })
        .collect();

    let cells: Vec<((i32, i32), &Vec<Generator>)> =
        bases.iter().map(|(&k, v)| (k, v)).collect();
    let boundaries: BTreeMap<(i32, i32), SparseIntMatrix> = cells
        .par_iter()
        .filter_map(|&((h, q), basis)| {
            let target = bases.get(&(h + 1, q))?;
            let target_index = &index[&(h + 1, q)];
            let mut mat = SparseIntMatrix::new(target.len(), basis.len());
            let mut last_state: Option<(Resolution, SmoothedState)> = None;
            for (col, &gen) in basis.iter().enumerate() {
                let state = match &last_state {
                    Some((r, s)) if *r == gen.res => s.clone(),
                    _ => {
                        let s = smooth(diagram, gen.res);
                        last_state = Some((gen.res, s.clone()));
                        s
                    }
                };
                for i in 0..gen.res.len() {
                    if gen.res.bit(i) != 0 {
                        continue;
                    }
                    let edge =
                        edge_type_with_source(diagram, gen.res, i, state.clone()).ok()?;
                    let s = opts.sign.sign(gen.res, i);
                    for (coeff, img) in edge_image(&edge, gen, s) {
                        if let Some(&row) = target_index.get(&img) {
                            mat.add_to(row, col, coeff.into());
                        }
                        // images outside the q-slice cannot occur: the
                        // differential preserves q exactly
                    }
                }
            }
            Some(((h, q), mat))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    Ok(GradedChainComplex {
        diagram: diagram.clone(),
        ctx,
        sign: opts.sign,
        bases,
        boundaries,
    })
}

/// Split a complex at a free crossing into the 1-resolution subcomplex and
/// the 0-resolution quotient, both keeping their ambient gradings.
pub fn split_at(
    complex: &GradedChainComplex,
    free_index: usize,
) -> Result<(GradedChainComplex, GradedChainComplex)> {
    if free_index >= complex.diagram.free_count() {
        return Err(KhError::InvalidInput(format!(
            "crossing index {free_index} is not a free crossing"
        )));
    }
    let part = |want_bit: u8| -> GradedChainComplex {
        let mut bases: BTreeMap<(i32, i32), Vec<Generator>> = BTreeMap::new();
        for (&k, basis) in &complex.bases {
            let filtered: Vec<Generator> = basis
                .iter()
                .copied()
                .filter(|g| g.res.bit(free_index) == want_bit)
                .collect();
            if !filtered.is_empty() {
                bases.insert(k, filtered);
            }
        }
        let mut boundaries = BTreeMap::new();
        for (&(h, q), big) in &complex.boundaries {
            let (src, tgt) = match (bases.get(&(h, q)), bases.get(&(h + 1, q))) {
                (Some(s), Some(t)) => (s, t),
                _ => continue,
            };
            let src_pos: HashMap<Generator, usize> =
                src.iter().enumerate().map(|(i, &g)| (g, i)).collect();
            let tgt_pos: HashMap<Generator, usize> =
                tgt.iter().enumerate().map(|(i, &g)| (g, i)).collect();
            let full_src = &complex.bases[&(h, q)];
            let full_tgt = &complex.bases[&(h + 1, q)];
            let mut mat = SparseIntMatrix::new(tgt.len(), src.len());
            for (r, c, v) in big.entries() {
                if let (Some(&nr), Some(&nc)) =
                    (tgt_pos.get(&full_tgt[r]), src_pos.get(&full_src[c]))
                {
                    mat.set(nr, nc, v.clone());
                }
            }
            boundaries.insert((h, q), mat);
        }
        GradedChainComplex {
            diagram: complex.diagram.clone(),
            ctx: complex.ctx,
            sign: complex.sign,
            bases,
            boundaries,
        }
    };
    Ok((part(1), part(0)))
}
