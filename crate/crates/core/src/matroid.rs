//! Matroid instances and minor views.
//!
//! A [`Matroid`] owns one of five rank oracles (uniform, linear over GF(q),
//! graphic, projective geometry, explicit basis list) plus a memoized rank
//! cache. All computations go through a [`Minor`]: a view `base / C \ D`
//! holding contract and delete sets over the base ground set. Element indices
//! never shift — a minor's live set is simply `E \ (C ∪ D)` of the base — so
//! witnesses remain meaningful across nested minors, and nested views flatten
//! into a single (contract, delete) pair.
//!
//! Rank queries on a view reduce to base queries via
//! `r_view(X) = r_base(X ∪ C) − r_base(C)`, so the cache is keyed on the
//! flattened set `X ∪ C` alone. The cache is monotone (insert-only, idempotent
//! values), making concurrent queries race-free in the observable sense.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::subset::{k_subsets, Subset, MAX_GROUND};
use parking_lot::RwLock;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

/// Desk-scale cap applied by the catalog and exhaustive-search helpers.
/// Single instances may be larger (up to [`MAX_GROUND`]) when no subset
/// enumeration over the whole ground set is required.
pub const DESK_CAP: usize = 24;

/// A matrix over GF(q) whose columns are the ground set elements.
#[derive(Clone, Debug)]
pub struct LinearRep {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<u8>, // row-major
}

impl LinearRep {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<u8>) -> Result<LinearRep> {
        if entries.len() != rows * cols {
            return Err(Error::Input(format!(
                "matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let q = field.q();
        for &e in &entries {
            if e as u16 >= q {
                return Err(Error::ElementOutOfRange { value: e as u32, q });
            }
        }
        Ok(LinearRep { field, rows, cols, entries })
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.cols + col]
    }

    pub fn column(&self, col: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.entry(r, col)).collect()
    }

    /// Rank of the selected columns by Gaussian elimination.
    fn rank_of(&self, x: Subset) -> usize {
        let f = &self.field;
        // (pivot row, normalized vector) pairs
        let mut pivots: Vec<(usize, Vec<FieldElement>)> = Vec::new();
        for c in x.iter() {
            let mut v: Vec<FieldElement> =
                (0..self.rows).map(|r| FieldElement(self.entry(r, c))).collect();
            for (prow, pvec) in &pivots {
                let factor = v[*prow];
                if factor.0 != 0 {
                    for (vi, pi) in v.iter_mut().zip(pvec) {
                        *vi = f.sub(*vi, f.mul(factor, *pi));
                    }
                }
            }
            if let Some(r) = v.iter().position(|e| e.0 != 0) {
                let scale = f.inv(v[r]).expect("nonzero entry");
                for vi in v.iter_mut() {
                    *vi = f.mul(*vi, scale);
                }
                pivots.push((r, v));
            }
        }
        pivots.len()
    }
}

#[derive(Clone, Debug)]
pub enum Kind {
    Uniform { rank: usize },
    Linear(LinearRep),
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    /// PG(n−1, q): realized as a linear instance over the canonical point
    /// list, but remembered as projective geometry for serialization.
    ProjectiveGeometry { rep: LinearRep },
    ExplicitBases { bases: Vec<Subset> },
}

pub struct Matroid {
    n: usize,
    kind: Kind,
    cache: RwLock<HashMap<u64, u8>>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid(n={}, {})", self.n, self.describe())
    }
}

impl Matroid {
    fn build(n: usize, kind: Kind) -> Result<Matroid> {
        if n > MAX_GROUND {
            return Err(Error::GroundSetTooLarge { n, max: MAX_GROUND });
        }
        Ok(Matroid { n, kind, cache: RwLock::new(HashMap::new()) })
    }

    /// U_{rank,n}: every set of at most `rank` elements is independent.
    pub fn uniform(rank: usize, n: usize) -> Result<Matroid> {
        if rank > n {
            return Err(Error::Input(format!("uniform rank {rank} exceeds ground size {n}")));
        }
        Matroid::build(n, Kind::Uniform { rank })
    }

    pub fn linear(rep: LinearRep) -> Result<Matroid> {
        Matroid::build(rep.cols, Kind::Linear(rep))
    }

    /// Graphic matroid of a multigraph on `vertices` vertices; self-loops
    /// become matroid loops, parallel edges become parallel elements.
    pub fn graphic(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Matroid> {
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::Input(format!(
                    "edge ({u}, {v}) out of range for {vertices} vertices"
                )));
            }
        }
        Matroid::build(edges.len(), Kind::Graphic { vertices, edges })
    }

    /// PG(n−1, q), the rank-n projective geometry over GF(q).
    ///
    /// Canonical point representatives: every nonzero vector of GF(q)^n with
    /// its last nonzero coordinate equal to 1, enumerated in increasing order
    /// of the integer whose base-q digits are the coordinates (coordinate 0
    /// least significant). This fixes the element indexing bit-exactly.
    pub fn pg(rank: usize, q: u32) -> Result<Matroid> {
        if rank == 0 {
            return Err(Error::Input("projective geometry needs rank at least 1".into()));
        }
        let field = field_from_order(q)?;
        let qq = q as u64;
        let total = qq
            .checked_pow(rank as u32)
            .ok_or(Error::SizeCapExceeded { n: usize::MAX, cap: MAX_GROUND })?;
        let points = ((total - 1) / (qq - 1)) as usize;
        if points > MAX_GROUND {
            return Err(Error::SizeCapExceeded { n: points, cap: MAX_GROUND });
        }
        let mut entries = vec![0u8; rank * points];
        let mut col = 0usize;
        for w in 1..total {
            let mut digits = Vec::with_capacity(rank);
            let mut t = w;
            for _ in 0..rank {
                digits.push((t % qq) as u8);
                t /= qq;
            }
            let last_nonzero = digits.iter().rposition(|&d| d != 0).expect("w > 0");
            if digits[last_nonzero] != 1 {
                continue;
            }
            for (row, &d) in digits.iter().enumerate() {
                entries[row * points + col] = d;
            }
            col += 1;
        }
        debug_assert_eq!(col, points);
        let rep = LinearRep::new(field, rank, points, entries)?;
        Matroid::build(points, Kind::ProjectiveGeometry { rep })
    }

    /// Matroid given by an explicit list of bases. Validates that the list is
    /// nonempty, equicardinal, within range, and satisfies the basis-exchange
    /// property.
    pub fn from_bases(n: usize, bases: Vec<Subset>) -> Result<Matroid> {
        if n > MAX_GROUND {
            return Err(Error::GroundSetTooLarge { n, max: MAX_GROUND });
        }
        if bases.is_empty() {
            return Err(Error::Input("basis list is empty".into()));
        }
        let full = Subset::full(n);
        let r = bases[0].card();
        let mut seen: HashSet<u64> = HashSet::with_capacity(bases.len());
        for b in &bases {
            if !b.is_subset_of(full) {
                return Err(Error::Input(format!("basis {b:?} not within ground set")));
            }
            if b.card() != r {
                return Err(Error::Input("bases differ in cardinality".into()));
            }
            if !seen.insert(b.bits()) {
                return Err(Error::Input(format!("duplicate basis {b:?}")));
            }
        }
        // Basis exchange: for all B1, B2 and x in B1\B2 there is y in B2\B1
        // with B1 - x + y again a basis.
        for b1 in &bases {
            for b2 in &bases {
                for x in b1.minus(*b2).iter() {
                    let stem = b1.without(x);
                    let ok = b2.minus(*b1).iter().any(|y| seen.contains(&stem.with(y).bits()));
                    if !ok {
                        return Err(Error::Input(format!(
                            "basis exchange fails for {b1:?}, {b2:?} at element {x}"
                        )));
                    }
                }
            }
        }
        Matroid::build(n, Kind::ExplicitBases { bases })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn full_set(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::Uniform { rank } => format!("uniform r={rank}"),
            Kind::Linear(rep) => format!("linear q={} {}x{}", rep.field.q(), rep.rows, rep.cols),
            Kind::Graphic { vertices, edges } => {
                format!("graphic {} vertices {} edges", vertices, edges.len())
            }
            Kind::ProjectiveGeometry { rep } => {
                format!("pg rank={} q={}", rep.rows, rep.field.q())
            }
            Kind::ExplicitBases { bases } => format!("bases count={}", bases.len()),
        }
    }

    /// Memoized rank of a subset of the full ground set.
    pub fn rank_set(&self, x: Subset) -> usize {
        debug_assert!(x.is_subset_of(self.full_set()));
        if let Some(&r) = self.cache.read().get(&x.bits()) {
            return r as usize;
        }
        let r = match &self.kind {
            Kind::Uniform { rank } => x.card().min(*rank),
            Kind::Linear(rep) | Kind::ProjectiveGeometry { rep } => rep.rank_of(x),
            Kind::Graphic { vertices, edges } => graphic_rank(*vertices, edges, x),
            Kind::ExplicitBases { bases } => {
                bases.iter().map(|b| b.intersect(x).card()).max().unwrap_or(0)
            }
        };
        self.cache.write().insert(x.bits(), r as u8);
        r
    }

    /// All bases, by filtering r-subsets. Errors out rather than attempting
    /// an enumeration larger than the cap.
    pub fn enumerate_bases(&self) -> Result<Vec<Subset>> {
        let full = self.full_set();
        let r = self.rank_set(full);
        let count = binomial_usize(self.n, r);
        const CAP: usize = 2_000_000;
        if count > CAP {
            return Err(Error::SizeCapExceeded { n: count, cap: CAP });
        }
        Ok(k_subsets(full, r).into_iter().filter(|s| self.rank_set(*s) == r).collect())
    }

    /// Identity view of a freshly built matroid.
    pub fn into_view(self) -> Minor {
        Minor::of(Arc::new(self))
    }
}

fn binomial_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Union-find rank: the rank of an edge set is the number of merges that
/// join two previously distinct components.
fn graphic_rank(vertices: usize, edges: &[(usize, usize)], x: Subset) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut rank = 0;
    for e in x.iter() {
        let (u, v) = edges[e];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            rank += 1;
        }
    }
    rank
}

/// Factor a prime power q into (p, k) and build GF(q).
pub fn field_from_order(q: u32) -> Result<FieldSpec> {
    if q < 2 {
        return Err(Error::NotPrime(q));
    }
    let mut p = 2;
    while p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    let mut k = 0;
    let mut t = q;
    while t.is_multiple_of(p) {
        t /= p;
        k += 1;
    }
    if t != 1 {
        return Err(Error::NotPrime(q)); // not a prime power
    }
    FieldSpec::new(p, k)
}

/// A minor view `base / contract \ delete`.
#[derive(Clone)]
pub struct Minor {
    base: Arc<Matroid>,
    contract: Subset,
    delete: Subset,
}

impl fmt::Debug for Minor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Minor({:?} / {:?} \\ {:?})",
            self.base.describe(),
            self.contract,
            self.delete
        )
    }
}

impl Minor {
    /// The identity view of a base matroid.
    pub fn of(base: Arc<Matroid>) -> Minor {
        Minor { base, contract: Subset::EMPTY, delete: Subset::EMPTY }
    }

    /// Assemble a view from explicit parts.
    pub fn assemble(base: Arc<Matroid>, contract: Subset, delete: Subset) -> Result<Minor> {
        if !contract.is_disjoint(delete) {
            return Err(Error::OverlappingSets);
        }
        let full = base.full_set();
        if !contract.union(delete).is_subset_of(full) {
            return Err(Error::NotLive(format!("{:?}", contract.union(delete).minus(full))));
        }
        Ok(Minor { base, contract, delete })
    }

    pub fn base(&self) -> &Arc<Matroid> {
        &self.base
    }

    pub fn contract_set(&self) -> Subset {
        self.contract
    }

    pub fn delete_set(&self) -> Subset {
        self.delete
    }

    pub fn same_base(&self, other: &Minor) -> bool {
        Arc::ptr_eq(&self.base, &other.base)
    }

    pub fn is_identity(&self) -> bool {
        self.contract.is_empty() && self.delete.is_empty()
    }

    pub fn live(&self) -> Subset {
        self.base.full_set().minus(self.contract).minus(self.delete)
    }

    pub fn n_live(&self) -> usize {
        self.live().card()
    }

    /// Rank of a subset of the live ground set.
    pub fn rank(&self, x: Subset) -> usize {
        assert!(
            x.is_subset_of(self.live()),
            "rank query {x:?} outside live set {:?}",
            self.live()
        );
        self.base.rank_set(x.union(self.contract)) - self.base.rank_set(self.contract)
    }

    pub fn rank_full(&self) -> usize {
        self.rank(self.live())
    }

    /// cl(X) within the view: all live e with r(X ∪ e) = r(X).
    pub fn closure(&self, x: Subset) -> Subset {
        let rx = self.rank(x);
        let mut cl = x;
        for e in self.live().minus(x).iter() {
            if self.rank(x.with(e)) == rx {
                cl = cl.with(e);
            }
        }
        cl
    }

    pub fn is_loop(&self, e: usize) -> bool {
        assert!(self.live().contains(e));
        self.rank(Subset::singleton(e)) == 0
    }

    pub fn loops(&self) -> Subset {
        self.closure(Subset::EMPTY)
    }

    pub fn nonloops(&self) -> Subset {
        self.live().minus(self.loops())
    }

    /// Further minor; contract and delete sets must be disjoint live sets.
    pub fn minor(&self, contract: Subset, delete: Subset) -> Result<Minor> {
        if !contract.is_disjoint(delete) {
            return Err(Error::OverlappingSets);
        }
        let live = self.live();
        if !contract.union(delete).is_subset_of(live) {
            return Err(Error::NotLive(format!("{:?}", contract.union(delete).minus(live))));
        }
        Ok(Minor {
            base: self.base.clone(),
            contract: self.contract.union(contract),
            delete: self.delete.union(delete),
        })
    }

    pub fn contract(&self, c: Subset) -> Result<Minor> {
        self.minor(c, Subset::EMPTY)
    }

    pub fn delete(&self, d: Subset) -> Result<Minor> {
        self.minor(Subset::EMPTY, d)
    }

    /// Restriction to `x`: delete everything else.
    pub fn restrict(&self, x: Subset) -> Result<Minor> {
        if !x.is_subset_of(self.live()) {
            return Err(Error::NotLive(format!("{:?}", x.minus(self.live()))));
        }
        self.minor(Subset::EMPTY, self.live().minus(x))
    }

    /// Are X and Y skew: r(X ∪ Y) = r(X) + r(Y)?
    pub fn skew(&self, x: Subset, y: Subset) -> bool {
        self.rank(x.union(y)) == self.rank(x) + self.rank(y)
    }

    /// Greedy lexicographically-least basis of `within`.
    pub fn greedy_basis(&self, within: Subset) -> Vec<usize> {
        let mut basis = Vec::new();
        let mut cur = Subset::EMPTY;
        let mut r = 0;
        for e in within.iter() {
            if self.rank(cur.with(e)) > r {
                cur = cur.with(e);
                r += 1;
                basis.push(e);
            }
        }
        basis
    }
}
