//! Simplicial sets truncated at a dimension cap.
//!
//! Simplices are dense indices per dimension. Faces are stored for every
//! dimension `1..=cap`, degeneracies for every dimension `0..cap`, so all
//! operator lookups are total inside the truncation.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::words::{Letter, Relation, Saturation, WordSystem};

pub const DEFAULT_CAP: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSSet {
    cap: usize,
    names: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<usize>>>,
    degens: Vec<Vec<Vec<usize>>>,
}

/// A truncated simplicial set together with the keys it was built from.
#[derive(Clone, Debug)]
pub struct Keyed<K> {
    pub sset: TruncatedSSet,
    pub keys: Vec<Vec<K>>,
    pub index: Vec<HashMap<K, usize>>,
}

impl<K: Clone + Eq + Hash> Keyed<K> {
    pub fn id(&self, dim: usize, key: &K) -> Option<usize> {
        self.index.get(dim)?.get(key).copied()
    }

    pub fn key(&self, dim: usize, s: usize) -> &K {
        &self.keys[dim][s]
    }
}

/// All monotone maps `[m] -> [n]` as value lists, in lexicographic order.
pub fn monotone_maps(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m + 1);
    fn go(m: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            go(m, n, v, cur, out);
            cur.pop();
        }
    }
    go(m, n, 0, &mut cur, &mut out);
    out
}

/// All injective monotone maps `[m] -> [n]`.
pub fn injections(m: usize, n: usize) -> Vec<Vec<usize>> {
    monotone_maps(m, n).into_iter().filter(|g| g.windows(2).all(|w| w[0] < w[1])).collect()
}

fn sequence_name(seq: &[usize]) -> String {
    if seq.iter().all(|&v| v < 10) {
        seq.iter().map(|v| v.to_string()).collect()
    } else {
        seq.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl TruncatedSSet {
    /// Assembles a simplicial set from explicit operator tables without
    /// checking the simplicial identities (see [`TruncatedSSet::violations`]).
    pub fn from_tables(
        cap: usize,
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if names.len() != cap + 1 || faces.len() != cap + 1 || degens.len() != cap + 1 {
            return Err(Error::Shape(format!("expected tables for dimensions 0..={cap}")));
        }
        for n in 0..=cap {
            let count = names[n].len();
            if faces[n].len() != if n == 0 { 0 } else { count } {
                return Err(Error::Shape(format!("face table of dimension {n} has the wrong length")));
            }
            if degens[n].len() != if n == cap { 0 } else { count } {
                return Err(Error::Shape(format!("degeneracy table of dimension {n} has the wrong length")));
            }
            for (s, row) in faces[n].iter().enumerate() {
                if row.len() != n + 1 || row.iter().any(|&t| t >= names[n - 1].len()) {
                    return Err(Error::Shape(format!("bad faces for {}", names[n][s])));
                }
            }
            for (s, row) in degens[n].iter().enumerate() {
                if row.len() != n + 1 || row.iter().any(|&t| t >= names[n + 1].len()) {
                    return Err(Error::Shape(format!("bad degeneracies for {}", names[n][s])));
                }
            }
        }
        Ok(TruncatedSSet { cap, names, faces, degens })
    }

    /// Builds a simplicial set from keyed simplices and operator functions
    /// `face(dim, key, i)` and `degen(dim, key, i)`.
    pub fn from_model<K, N, F, D>(cap: usize, keys: Vec<Vec<K>>, name: N, face: F, degen: D) -> Result<Keyed<K>>
    where
        K: Clone + Eq + Hash + std::fmt::Debug,
        N: Fn(usize, &K) -> String,
        F: Fn(usize, &K, usize) -> K,
        D: Fn(usize, &K, usize) -> K,
    {
        assert_eq!(keys.len(), cap + 1, "one key list per dimension");
        let index: Vec<HashMap<K, usize>> =
            keys.iter().map(|ks| ks.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()).collect();
        let lookup = |dim: usize, k: &K| -> Result<usize> {
            index[dim]
                .get(k)
                .copied()
                .ok_or_else(|| Error::Shape(format!("operator produced unknown simplex {k:?} in dimension {dim}")))
        };
        let mut names = Vec::new();
        let mut faces = Vec::new();
        let mut degens = Vec::new();
        for (n, level) in keys.iter().enumerate().take(cap + 1) {
            names.push(level.iter().map(|k| name(n, k)).collect());
            let mut fs = Vec::new();
            let mut ds = Vec::new();
            for k in level {
                if n > 0 {
                    fs.push((0..=n).map(|i| lookup(n - 1, &face(n, k, i))).collect::<Result<Vec<_>>>()?);
                }
                if n < cap {
                    ds.push((0..=n).map(|i| lookup(n + 1, &degen(n, k, i))).collect::<Result<Vec<_>>>()?);
                }
            }
            faces.push(fs);
            degens.push(ds);
        }
        Ok(Keyed { sset: TruncatedSSet { cap, names, faces, degens }, keys, index })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn count(&self, dim: usize) -> usize {
        self.names.get(dim).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.count(0) == 0
    }

    pub fn name(&self, dim: usize, s: usize) -> &str {
        &self.names[dim][s]
    }

    pub fn names(&self, dim: usize) -> &[String] {
        &self.names[dim]
    }

    pub fn find(&self, dim: usize, name: &str) -> Option<usize> {
        self.names.get(dim)?.iter().position(|n| n == name)
    }

    pub fn face(&self, dim: usize, s: usize, i: usize) -> usize {
        self.faces[dim][s][i]
    }

    pub fn degen(&self, dim: usize, s: usize, i: usize) -> usize {
        self.degens[dim][s][i]
    }

    pub fn face_table(&self) -> &[Vec<Vec<usize>>] {
        &self.faces
    }

    pub fn degen_table(&self) -> &[Vec<Vec<usize>>] {
        &self.degens
    }

    /// `g^* x` for a monotone `g: [m] -> [dim]` given by its values; needs
    /// `m <= cap`.
    pub fn restrict(&self, dim: usize, x: usize, g: &[usize]) -> usize {
        debug_assert!(g.windows(2).all(|w| w[0] <= w[1]) && g.iter().all(|&v| v <= dim));
        let mut image: Vec<usize> = g.to_vec();
        image.dedup();
        // Remove the vertices outside the image, largest index first.
        let mut cur = x;
        let mut cur_dim = dim;
        for v in (0..=dim).rev() {
            if image.binary_search(&v).is_err() {
                cur = self.face(cur_dim, cur, v);
                cur_dim -= 1;
            }
        }
        // Now apply the surjection [m] -> [k] onto the image positions.
        for j in 0..g.len().saturating_sub(1) {
            if g[j] == g[j + 1] {
                cur = self.degen(cur_dim, cur, j);
                cur_dim += 1;
            }
        }
        cur
    }

    pub fn vertices(&self, dim: usize, x: usize) -> Vec<usize> {
        (0..=dim).map(|i| self.restrict(dim, x, &[i])).collect()
    }

    /// Edge `x|{i,j}` for `i <= j`.
    pub fn edge(&self, dim: usize, x: usize, i: usize, j: usize) -> usize {
        self.restrict(dim, x, &[i, j])
    }

    pub fn is_degenerate(&self, dim: usize, x: usize) -> bool {
        dim > 0 && dim <= self.cap && (0..dim).any(|i| self.degen(dim - 1, self.face(dim, x, i), i) == x)
    }

    pub fn nondegenerate(&self, dim: usize) -> Vec<usize> {
        (0..self.count(dim)).filter(|&x| !self.is_degenerate(dim, x)).collect()
    }

    /// True when every simplex above dimension 1 is degenerate.
    pub fn is_one_skeletal(&self) -> bool {
        (2..=self.cap).all(|n| self.nondegenerate(n).is_empty())
    }

    /// Violated simplicial identities, one line per witness.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for n in 0..=self.cap {
            for x in 0..self.count(n) {
                let nm = &self.names[n][x];
                if n >= 2 {
                    for j in 1..=n {
                        for i in 0..j {
                            let a = self.face(n - 1, self.face(n, x, j), i);
                            let b = self.face(n - 1, self.face(n, x, i), j - 1);
                            if a != b {
                                out.push(format!("d{i} d{j} != d{} d{i} on {nm}", j - 1));
                            }
                        }
                    }
                }
                if n < self.cap {
                    for j in 0..=n {
                        let y = self.degen(n, x, j);
                        for i in 0..=n + 1 {
                            let lhs = self.face(n + 1, y, i);
                            let rhs = if i < j {
                                self.degen(n - 1, self.face(n, x, i), j - 1)
                            } else if i == j || i == j + 1 {
                                x
                            } else {
                                self.degen(n - 1, self.face(n, x, i - 1), j)
                            };
                            if lhs != rhs {
                                out.push(format!("d{i} s{j} identity fails on {nm}"));
                            }
                        }
                    }
                }
                if n + 1 < self.cap {
                    for j in 0..=n {
                        for i in 0..=j {
                            let a = self.degen(n + 1, self.degen(n, x, j), i);
                            let b = self.degen(n + 1, self.degen(n, x, i), j + 1);
                            if a != b {
                                out.push(format!("s{i} s{j} != s{} s{i} on {nm}", j + 1));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// The simplicial subset spanned by `keep` (closed under degeneracies
    /// automatically; must be closed under faces).
    pub fn subcomplex(self: &Arc<Self>, keep: &[Vec<bool>]) -> Result<(Arc<TruncatedSSet>, SimplicialMap)> {
        let mut keep: Vec<Vec<bool>> = keep.to_vec();
        for n in 0..self.cap {
            for x in 0..self.count(n) {
                if keep[n][x] {
                    for i in 0..=n {
                        keep[n + 1][self.degen(n, x, i)] = true;
                    }
                }
            }
        }
        for n in 1..=self.cap {
            for x in 0..self.count(n) {
                if keep[n][x] {
                    if let Some(i) = (0..=n).find(|&i| !keep[n - 1][self.face(n, x, i)]) {
                        return Err(Error::Precondition(format!(
                            "face d{i} of {} is not in the subset",
                            self.names[n][x]
                        )));
                    }
                }
            }
        }
        let ids: Vec<Vec<usize>> = keep.iter().map(|k| (0..k.len()).filter(|&x| k[x]).collect()).collect();
        let mut new_id = vec![Vec::new(); self.cap + 1];
        for n in 0..=self.cap {
            new_id[n] = vec![usize::MAX; self.count(n)];
            for (i, &x) in ids[n].iter().enumerate() {
                new_id[n][x] = i;
            }
        }
        let names =
            ids.iter().enumerate().map(|(n, xs)| xs.iter().map(|&x| self.names[n][x].clone()).collect()).collect();
        let faces = (0..=self.cap)
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                ids[n].iter().map(|&x| self.faces[n][x].iter().map(|&t| new_id[n - 1][t]).collect()).collect()
            })
            .collect();
        let degens = (0..=self.cap)
            .map(|n| {
                if n == self.cap {
                    return Vec::new();
                }
                ids[n].iter().map(|&x| self.degens[n][x].iter().map(|&t| new_id[n + 1][t]).collect()).collect()
            })
            .collect();
        let sub = Arc::new(TruncatedSSet { cap: self.cap, names, faces, degens });
        let incl = SimplicialMap { source: sub.clone(), target: self.clone(), maps: ids };
        Ok((sub, incl))
    }

    /// The same simplicial set with everything above `cap` dropped.
    pub fn truncate(&self, cap: usize) -> TruncatedSSet {
        assert!(cap <= self.cap, "cannot truncate above the stored cap");
        let mut t = TruncatedSSet {
            cap,
            names: self.names[..=cap].to_vec(),
            faces: self.faces[..=cap].to_vec(),
            degens: self.degens[..=cap].to_vec(),
        };
        t.degens[cap] = Vec::new();
        t
    }

    pub fn empty(cap: usize) -> Self {
        TruncatedSSet {
            cap,
            names: vec![Vec::new(); cap + 1],
            faces: vec![Vec::new(); cap + 1],
            degens: vec![Vec::new(); cap + 1],
        }
    }
}

/// Disjoint union; simplex names are prefixed with the summand index.
pub fn coproduct(parts: &[&TruncatedSSet]) -> Result<TruncatedSSet> {
    coproduct_at(parts.first().map_or(0, |p| p.cap), parts)
}

/// [`coproduct`] with an explicit cap, so that the empty union keeps it.
pub fn coproduct_at(cap: usize, parts: &[&TruncatedSSet]) -> Result<TruncatedSSet> {
    if let Some(p) = parts.iter().find(|p| p.cap != cap) {
        return Err(Error::CapMismatch(cap, p.cap));
    }
    let mut out = TruncatedSSet::empty(cap);
    for (k, p) in parts.iter().enumerate() {
        let offsets: Vec<usize> = out.names.iter().map(Vec::len).collect();
        for n in 0..=cap {
            out.names[n].extend(p.names[n].iter().map(|s| format!("{k}:{s}")));
            if n > 0 {
                out.faces[n].extend(p.faces[n].iter().map(|r| r.iter().map(|&t| t + offsets[n - 1]).collect()));
            }
            if n < cap {
                out.degens[n].extend(p.degens[n].iter().map(|r| r.iter().map(|&t| t + offsets[n + 1]).collect()));
            }
        }
    }
    Ok(out)
}

/// The standard simplex `Δ^n` truncated at `cap`; keys are monotone value
/// lists into `[n]`.
pub fn delta(n: usize, cap: usize) -> Keyed<Vec<usize>> {
    delta_subset(n, cap, |_| true)
}

/// Simplices of `Δ^n` whose vertex set satisfies `keep` (which must be
/// closed under passing to subsets).
pub fn delta_subset<P: Fn(&[usize]) -> bool>(n: usize, cap: usize, keep: P) -> Keyed<Vec<usize>> {
    let keys: Vec<Vec<Vec<usize>>> = (0..=cap)
        .map(|m| {
            monotone_maps(m, n)
                .into_iter()
                .filter(|g| {
                    let mut v = g.clone();
                    v.dedup();
                    keep(&v)
                })
                .collect()
        })
        .collect();
    TruncatedSSet::from_model(
        cap,
        keys,
        |_, k| sequence_name(k),
        |_, k, i| {
            let mut k = k.clone();
            k.remove(i);
            k
        },
        |_, k, i| {
            let mut k = k.clone();
            k.insert(i, k[i]);
            k
        },
    )
    .expect("subsets of a simplex closed under faces form a simplicial set")
}

/// `Λ^{1..n-1}[n]`: the simplices of `Δ^n` not containing both `0` and `n`.
pub fn generalized_inner_horn(n: usize, cap: usize) -> Keyed<Vec<usize>> {
    assert!(n >= 1, "horns need n >= 1");
    delta_subset(n, cap, |v| !(v.contains(&0) && v.contains(&n)))
}

/// A composable chain `start -> ... ` with `arrows[0]` applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub start: ObjId,
    pub arrows: Vec<MorId>,
}

/// The nerve of a finite category, truncated at `cap`.
pub fn nerve(c: &FinCategory, cap: usize) -> Keyed<Chain> {
    let mut keys: Vec<Vec<Chain>> = vec![(0..c.num_objects()).map(|o| Chain { start: o, arrows: vec![] }).collect()];
    for _ in 1..=cap {
        let prev = keys.last().unwrap();
        let mut next = Vec::new();
        for ch in prev {
            let end = ch.arrows.last().map_or(ch.start, |&m| c.tgt(m));
            for &m in c.outgoing(end) {
                let mut arrows = ch.arrows.clone();
                arrows.push(m);
                next.push(Chain { start: ch.start, arrows });
            }
        }
        keys.push(next);
    }
    let result = TruncatedSSet::from_model(
        cap,
        keys,
        |_, ch| {
            if ch.arrows.is_empty() {
                c.object_name(ch.start).to_string()
            } else {
                format!("<{}>", ch.arrows.iter().map(|&m| c.name(m)).collect::<Vec<_>>().join(","))
            }
        },
        |n, ch, i| {
            let mut arrows = ch.arrows.clone();
            if i == 0 {
                let first = arrows.remove(0);
                Chain { start: c.tgt(first), arrows }
            } else if i == n {
                arrows.pop();
                Chain { start: ch.start, arrows }
            } else {
                let composite = c.comp(arrows[i], arrows[i - 1]);
                arrows.splice(i - 1..=i, [composite]);
                Chain { start: ch.start, arrows }
            }
        },
        |_, ch, i| {
            let mut arrows = ch.arrows.clone();
            let at = if i == 0 { ch.start } else { c.tgt(arrows[i - 1]) };
            arrows.insert(i, c.identity(at));
            Chain { start: ch.start, arrows }
        },
    );
    result.expect("nerves of valid categories are closed under their operators")
}

/// `N(F)` for a functor between categories with the given nerves.
pub fn nerve_of_functor(f: &crate::fincat::CatFunctor, source: &Keyed<Chain>, target: &Keyed<Chain>) -> SimplicialMap {
    let maps = source
        .keys
        .iter()
        .enumerate()
        .map(|(n, chains)| {
            chains
                .iter()
                .map(|ch| {
                    let image =
                        Chain { start: f.obj_map[ch.start], arrows: ch.arrows.iter().map(|&m| f.mor_map[m]).collect() };
                    target.id(n, &image).expect("functors send chains to chains")
                })
                .collect()
        })
        .collect();
    SimplicialMap { source: Arc::new(source.sset.clone()), target: Arc::new(target.sset.clone()), maps }
}

/// Simplices of a 1-skeletal simplicial set on a quiver: a degenerate
/// vertex, or an edge `e` degenerated so that its first `split` vertices
/// are the source.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuiverKey {
    Vertex(usize),
    Edge { edge: usize, split: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    /// `(name, src, tgt)`
    pub edges: Vec<(String, usize, usize)>,
}

/// The 1-skeletal simplicial set generated by a quiver.
pub fn quiver_sset(q: &QuiverSpec, cap: usize) -> Keyed<QuiverKey> {
    let keys = (0..=cap)
        .map(|m| {
            let mut ks: Vec<QuiverKey> = (0..q.vertices.len()).map(QuiverKey::Vertex).collect();
            if m >= 1 {
                for e in 0..q.edges.len() {
                    for split in 1..=m {
                        ks.push(QuiverKey::Edge { edge: e, split });
                    }
                }
            }
            ks
        })
        .collect();
    let (src, tgt) = (|e: usize| q.edges[e].1, |e: usize| q.edges[e].2);
    TruncatedSSet::from_model(
        cap,
        keys,
        |m, k| match *k {
            QuiverKey::Vertex(v) if m == 0 => q.vertices[v].clone(),
            QuiverKey::Vertex(v) => format!("{}@{}", q.vertices[v], "0".repeat(m + 1)),
            QuiverKey::Edge { edge, .. } if m == 1 => q.edges[edge].0.clone(),
            QuiverKey::Edge { edge, split } => {
                format!("{}@{}{}", q.edges[edge].0, "0".repeat(split), "1".repeat(m + 1 - split))
            }
        },
        |m, k, i| match *k {
            QuiverKey::Vertex(v) => QuiverKey::Vertex(v),
            QuiverKey::Edge { edge, split } => {
                let s = if i < split { split - 1 } else { split };
                if s == 0 {
                    QuiverKey::Vertex(tgt(edge))
                } else if s == m {
                    QuiverKey::Vertex(src(edge))
                } else {
                    QuiverKey::Edge { edge, split: s }
                }
            }
        },
        |_, k, i| match *k {
            QuiverKey::Vertex(v) => QuiverKey::Vertex(v),
            QuiverKey::Edge { edge, split } => {
                QuiverKey::Edge { edge, split: if i < split { split + 1 } else { split } }
            }
        },
    )
    .expect("quiver simplicial sets are closed under their operators")
}

/// Named 1-skeletal test shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Delta0,
    Delta1,
    Spine2,
    Spine3,
    /// `a -> b <- c`
    Wedge,
    /// Two parallel edges `a => b`.
    Parallel,
}

impl Builtin {
    pub const ALL: [Builtin; 6] =
        [Builtin::Delta0, Builtin::Delta1, Builtin::Spine2, Builtin::Spine3, Builtin::Wedge, Builtin::Parallel];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Delta0 => "delta0",
            Builtin::Delta1 => "delta1",
            Builtin::Spine2 => "spine2",
            Builtin::Spine3 => "spine3",
            Builtin::Wedge => "wedge",
            Builtin::Parallel => "parallel",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown simplicial set `{s}`")))
    }

    pub fn quiver(self) -> QuiverSpec {
        let v = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let spine = |k: usize| QuiverSpec {
            vertices: (0..=k).map(|i| i.to_string()).collect(),
            edges: (1..=k).map(|i| (format!("e{i}"), i - 1, i)).collect(),
        };
        match self {
            Builtin::Delta0 => spine(0),
            Builtin::Delta1 => spine(1),
            Builtin::Spine2 => spine(2),
            Builtin::Spine3 => spine(3),
            Builtin::Wedge => {
                QuiverSpec { vertices: v(&["a", "b", "c"]), edges: vec![("f".into(), 0, 1), ("g".into(), 2, 1)] }
            }
            Builtin::Parallel => {
                QuiverSpec { vertices: v(&["a", "b"]), edges: vec![("u".into(), 0, 1), ("v".into(), 0, 1)] }
            }
        }
    }

    pub fn build(self, cap: usize) -> TruncatedSSet {
        quiver_sset(&self.quiver(), cap).sset
    }
}

/// A simplicial map given by its action on simplices in each dimension.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: Arc<TruncatedSSet>,
    pub target: Arc<TruncatedSSet>,
    pub maps: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn new(source: Arc<TruncatedSSet>, target: Arc<TruncatedSSet>, maps: Vec<Vec<usize>>) -> Result<Self> {
        if source.cap != target.cap {
            return Err(Error::CapMismatch(source.cap, target.cap));
        }
        let f = SimplicialMap { source, target, maps };
        match f.violations().first() {
            Some(v) => Err(Error::InvalidFunctor(v.clone())),
            None => Ok(f),
        }
    }

    pub fn identity(k: Arc<TruncatedSSet>) -> Self {
        let maps = k.counts().iter().map(|&c| (0..c).collect()).collect();
        SimplicialMap { source: k.clone(), target: k, maps }
    }

    pub fn apply(&self, dim: usize, x: usize) -> usize {
        self.maps[dim][x]
    }

    pub fn after(&self, inner: &SimplicialMap) -> SimplicialMap {
        let maps = inner.maps.iter().enumerate().map(|(n, m)| m.iter().map(|&x| self.maps[n][x]).collect()).collect();
        SimplicialMap { source: inner.source.clone(), target: self.target.clone(), maps }
    }

    pub fn violations(&self) -> Vec<String> {
        let (k, l) = (&self.source, &self.target);
        let mut out = Vec::new();
        if self.maps.len() != k.cap + 1 {
            return vec!["map has the wrong number of dimensions".into()];
        }
        for n in 0..=k.cap {
            if self.maps[n].len() != k.count(n) || self.maps[n].iter().any(|&y| y >= l.count(n)) {
                return vec![format!("dimension {n} is not a function between simplex sets")];
            }
        }
        for n in 0..=k.cap {
            for x in 0..k.count(n) {
                let fx = self.maps[n][x];
                for i in 0..=n {
                    if n > 0 && self.maps[n - 1][k.face(n, x, i)] != l.face(n, fx, i) {
                        out.push(format!("does not commute with d{i} at {}", k.name(n, x)));
                    }
                    if n < k.cap && self.maps[n + 1][k.degen(n, x, i)] != l.degen(n, fx, i) {
                        out.push(format!("does not commute with s{i} at {}", k.name(n, x)));
                    }
                }
            }
        }
        out
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().enumerate().all(|(n, m)| {
            let mut seen = vec![false; self.target.count(n)];
            m.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.maps.iter().enumerate().all(|(n, m)| m.len() == self.target.count(n))
    }
}

/// Dimensionwise product; keys are pairs of simplex ids.
pub fn product_sset(k: &TruncatedSSet, l: &TruncatedSSet) -> Result<Keyed<(usize, usize)>> {
    if k.cap != l.cap {
        return Err(Error::CapMismatch(k.cap, l.cap));
    }
    let keys =
        (0..=k.cap).map(|n| (0..k.count(n)).flat_map(|x| (0..l.count(n)).map(move |y| (x, y))).collect()).collect();
    TruncatedSSet::from_model(
        k.cap,
        keys,
        |n, &(x, y)| format!("({},{})", k.name(n, x), l.name(n, y)),
        |n, &(x, y), i| (k.face(n, x, i), l.face(n, y, i)),
        |n, &(x, y), i| (k.degen(n, x, i), l.degen(n, y, i)),
    )
}

/// The pushout `B ⊔_A C` of `f: A -> B` and `g: A -> C`, with its two
/// structure maps.
pub struct Pushout {
    pub object: Arc<TruncatedSSet>,
    pub from_b: SimplicialMap,
    pub from_c: SimplicialMap,
}

pub fn pushout(f: &SimplicialMap, g: &SimplicialMap) -> Result<Pushout> {
    if !Arc::ptr_eq(&f.source, &g.source) && *f.source != *g.source {
        return Err(Error::Precondition("pushout legs have different sources".into()));
    }
    let (a, b, c) = (&f.source, &f.target, &g.target);
    let cap = a.cap;
    let mut names = vec![Vec::new(); cap + 1];
    let mut class_of_b = vec![Vec::new(); cap + 1];
    let mut class_of_c = vec![Vec::new(); cap + 1];
    for n in 0..=cap {
        let (nb, nc) = (b.count(n), c.count(n));
        let mut parent: Vec<usize> = (0..nb + nc).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for x in 0..a.count(n) {
            let (u, v) = (find(&mut parent, f.maps[n][x]), find(&mut parent, nb + g.maps[n][x]));
            if u != v {
                let (lo, hi) = (u.min(v), u.max(v));
                parent[hi] = lo;
            }
        }
        let roots: Vec<usize> = (0..nb + nc).map(|x| find(&mut parent, x)).collect();
        let mut id_of_root = HashMap::new();
        let mut class = vec![0; nb + nc];
        for x in 0..nb + nc {
            let r = roots[x];
            let next = id_of_root.len();
            let id = *id_of_root.entry(r).or_insert(next);
            if id == next {
                names[n].push(if r < nb { b.name(n, r).to_string() } else { c.name(n, r - nb).to_string() });
            }
            class[x] = id;
        }
        class_of_b[n] = class[..nb].to_vec();
        class_of_c[n] = class[nb..].to_vec();
    }
    let mut faces = vec![Vec::new(); cap + 1];
    let mut degens = vec![Vec::new(); cap + 1];
    for n in 0..=cap {
        let count = names[n].len();
        if n > 0 {
            faces[n] = vec![Vec::new(); count];
        }
        if n < cap {
            degens[n] = vec![Vec::new(); count];
        }
        let members = (0..b.count(n)).map(|x| (b, &class_of_b, x)).chain((0..c.count(n)).map(|x| (c, &class_of_c, x)));
        for (side, cls, x) in members {
            let id = cls[n][x];
            if n > 0 && faces[n][id].is_empty() {
                faces[n][id] = (0..=n).map(|i| cls[n - 1][side.face(n, x, i)]).collect();
            }
            if n < cap && degens[n][id].is_empty() {
                degens[n][id] = (0..=n).map(|i| cls[n + 1][side.degen(n, x, i)]).collect();
            }
        }
    }
    let object = Arc::new(TruncatedSSet { cap, names, faces, degens });
    Ok(Pushout {
        from_b: SimplicialMap { source: b.clone(), target: object.clone(), maps: class_of_b },
        from_c: SimplicialMap { source: c.clone(), target: object.clone(), maps: class_of_c },
        object,
    })
}

/// `hK` as a finite category, with the image of every edge of `K`.
#[derive(Clone, Debug)]
pub struct HomotopyCategory {
    pub category: Arc<FinCategory>,
    /// Morphism of `category` represented by each edge of `K`.
    pub edge_class: Vec<MorId>,
    /// Length of the shortest word representing each morphism.
    pub word_length: Vec<usize>,
    pub saturation: Saturation,
}

/// The homotopy category: free on nondegenerate edges, each 2-simplex `σ`
/// imposing `d0σ ∘ d2σ = d1σ`.
pub fn homotopy_category(k: &TruncatedSSet, budget: usize) -> Result<HomotopyCategory> {
    if k.cap < 2 {
        return Err(Error::Precondition("the homotopy category needs simplices up to dimension 2".into()));
    }
    let mut letters = Vec::new();
    let mut letter_of = vec![None; k.count(1)];
    for (e, slot) in letter_of.iter_mut().enumerate() {
        if !k.is_degenerate(1, e) {
            *slot = Some(letters.len());
            letters.push(Letter { name: k.name(1, e).to_string(), src: k.face(1, e, 1), tgt: k.face(1, e, 0) });
        }
    }
    let word = |e: usize| letter_of[e].map_or(vec![], |l| vec![l]);
    let mut relations = Vec::new();
    for s in 0..k.count(2) {
        let mut lhs = word(k.face(2, s, 2));
        lhs.extend(word(k.face(2, s, 0)));
        let rhs = word(k.face(2, s, 1));
        if lhs != rhs {
            let src = k.face(1, k.face(2, s, 2), 1);
            relations.push(Relation::new(src, lhs, rhs));
        }
    }
    let system = WordSystem { objects: k.names(0).to_vec(), letters, relations };
    let saturation = system.saturate(budget);
    let category = Arc::new(saturation.to_category()?);
    let edge_class = (0..k.count(1))
        .map(|e| saturation.class_index(k.face(1, e, 1), &word(e)).expect("edges are enumerated words"))
        .collect();
    let word_length = saturation.classes.iter().map(|&r| saturation.words[r].len()).collect();
    Ok(HomotopyCategory { category, edge_class, word_length, saturation })
}

/// The nerve of `hK` together with rank data, for 1-skeletal `K`.
#[derive(Clone, Debug)]
pub struct NhK {
    pub k: Arc<TruncatedSSet>,
    pub hk: HomotopyCategory,
    pub nerve: Keyed<Chain>,
}

impl NhK {
    pub fn new(k: Arc<TruncatedSSet>, budget: usize) -> Result<Self> {
        if !k.is_one_skeletal() {
            let (dim, index) = (2..=k.cap)
                .find_map(|n| k.nondegenerate(n).first().map(|&x| (n, x)))
                .expect("not 1-skeletal means a nondegenerate simplex above dimension 1");
            return Err(Error::NotOneSkeletal { dim, index });
        }
        let hk = homotopy_category(&k, budget)?;
        let nerve = nerve(&hk.category, k.cap);
        Ok(NhK { k, hk, nerve })
    }

    pub fn cap(&self) -> usize {
        self.k.cap
    }

    pub fn sset(&self) -> &TruncatedSSet {
        &self.nerve.sset
    }

    /// Rank of a morphism of `hK`: the number of nondegenerate edges of `K`
    /// in its (unique) factorization.
    pub fn morphism_rank(&self, m: MorId) -> usize {
        self.hk.word_length[m]
    }

    fn composite(&self, ch: &Chain) -> MorId {
        let c = &self.hk.category;
        ch.arrows.iter().fold(c.identity(ch.start), |acc, &m| c.comp(m, acc))
    }

    /// Rank of the long edge.
    pub fn rank_of_simplex(&self, dim: usize, s: usize) -> usize {
        self.morphism_rank(self.composite(self.nerve.key(dim, s)))
    }

    /// All consecutive edges have rank 1.
    pub fn is_primitive(&self, dim: usize, s: usize) -> bool {
        self.nerve.key(dim, s).arrows.iter().all(|&m| self.morphism_rank(m) == 1)
    }

    pub fn primitives(&self, dim: usize) -> Vec<usize> {
        (0..self.sset().count(dim)).filter(|&s| self.is_primitive(dim, s)).collect()
    }

    /// The primitive simplex `τ` of dimension `rank σ` and the monotone `f`
    /// with `σ = f^* τ`, where `f(i)` is the rank of `σ|{0,i}`.
    pub fn primitive_factorization(&self, dim: usize, s: usize) -> Result<(usize, Vec<usize>)> {
        let ch = self.nerve.key(dim, s);
        let sat = &self.hk.saturation;
        let long = &sat.words[sat.classes[self.composite(ch)]];
        let r = long.len();
        if r > self.cap() {
            return Err(Error::Precondition(format!("rank {r} exceeds the cap {}", self.cap())));
        }
        let c = &self.hk.category;
        let arrows: Vec<MorId> =
            long.letters.iter().map(|&l| sat.class_index(sat.system.letters[l].src, &[l]).unwrap()).collect();
        let tau = self.nerve.id(r, &Chain { start: ch.start, arrows }).expect("chains up to the cap are simplices");
        let mut f = Vec::with_capacity(dim + 1);
        let mut acc = c.identity(ch.start);
        f.push(0);
        for &m in &ch.arrows {
            acc = c.comp(m, acc);
            f.push(self.morphism_rank(acc));
        }
        Ok((tau, f))
    }

    /// Every `(τ, f)` with `τ` primitive of dimension `rank σ` and
    /// `f^* τ = σ`, by exhaustive search.
    pub fn all_primitive_factorizations(&self, dim: usize, s: usize) -> Vec<(usize, Vec<usize>)> {
        let r = self.rank_of_simplex(dim, s);
        if r > self.cap() {
            return Vec::new();
        }
        let maps = monotone_maps(dim, r);
        let mut out = Vec::new();
        for tau in self.primitives(r) {
            for f in &maps {
                if self.sset().restrict(r, tau, f) == s {
                    out.push((tau, f.clone()));
                }
            }
        }
        out
    }

    /// The map `K -> N(hK)` sending each simplex to the chain of its
    /// consecutive edges.
    pub fn unit_map(&self) -> SimplicialMap {
        let k = &self.k;
        let maps = (0..=k.cap)
            .map(|n| {
                (0..k.count(n))
                    .map(|x| {
                        let start = k.vertices(n, x)[0];
                        let arrows = (0..n).map(|j| self.hk.edge_class[k.edge(n, x, j, j + 1)]).collect();
                        self.nerve.id(n, &Chain { start, arrows }).expect("chains up to the cap are simplices")
                    })
                    .collect()
            })
            .collect();
        SimplicialMap { source: k.clone(), target: Arc::new(self.nerve.sset.clone()), maps }
    }

    /// `K^(n)`: simplices of rank at most `n`, as a subcomplex of `N(hK)`.
    pub fn stage(&self, n: usize) -> (Arc<TruncatedSSet>, SimplicialMap) {
        let full = Arc::new(self.nerve.sset.clone());
        let keep: Vec<Vec<bool>> =
            (0..=self.cap()).map(|d| (0..full.count(d)).map(|s| self.rank_of_simplex(d, s) <= n).collect()).collect();
        full.subcomplex(&keep).expect("rank is monotone under faces")
    }

    pub fn max_rank(&self) -> usize {
        (0..=self.cap())
            .flat_map(|d| (0..self.sset().count(d)).map(move |s| (d, s)))
            .map(|(d, s)| self.rank_of_simplex(d, s))
            .max()
            .unwrap_or(0)
    }

    /// Checks that `X_n × Λ^{1..n-1}[n] -> X_n × Δ^n` pushed out along
    /// `X_n × Λ^{1..n-1}[n] -> K^(n-1)` is `K^(n)`, by computing the pushout
    /// and testing the comparison map for bijectivity.
    pub fn verify_pushout(&self, n: usize) -> Result<PushoutCheck> {
        let cap = self.cap();
        if n == 0 || n > cap {
            return Err(Error::Precondition(format!("stage {n} must lie in 1..={cap}")));
        }
        let prims = self.primitives(n);
        let horn = generalized_inner_horn(n, cap);
        let simplex = delta(n, cap);
        let horn_copies = Arc::new(coproduct_at(cap, &vec![&horn.sset; prims.len()])?);
        let simplex_copies = Arc::new(coproduct_at(cap, &vec![&simplex.sset; prims.len()])?);
        let (lower, lower_incl) = self.stage(n - 1);
        let (upper, upper_incl) = self.stage(n);
        let full = &self.nerve.sset;
        // Position of each full simplex inside a stage.
        let locate = |incl: &SimplicialMap| -> Vec<HashMap<usize, usize>> {
            incl.maps.iter().map(|m| m.iter().enumerate().map(|(i, &x)| (x, i)).collect()).collect()
        };
        let (lower_at, upper_at) = (locate(&lower_incl), locate(&upper_incl));
        let incl_maps: Vec<Vec<usize>> = (0..=cap)
            .map(|d| {
                (0..prims.len())
                    .flat_map(|c| horn.keys[d].iter().map(move |g| (c, g)))
                    .map(|(c, g)| c * simplex.sset.count(d) + simplex.index[d][g])
                    .collect()
            })
            .collect();
        let attach_maps: Vec<Vec<usize>> = (0..=cap)
            .map(|d| {
                prims
                    .iter()
                    .flat_map(|&tau| horn.keys[d].iter().map(move |g| (tau, g)))
                    .map(|(tau, g)| lower_at[d][&full.restrict(n, tau, g)])
                    .collect()
            })
            .collect();
        let horn_to_simplex =
            SimplicialMap { source: horn_copies.clone(), target: simplex_copies.clone(), maps: incl_maps };
        let attach = SimplicialMap { source: horn_copies.clone(), target: lower.clone(), maps: attach_maps };
        debug_assert!(horn_to_simplex.violations().is_empty() && attach.violations().is_empty());
        let po = pushout(&horn_to_simplex, &attach)?;
        // Comparison P -> K^(n), assembled from both legs.
        let mut maps: Vec<Vec<Option<usize>>> = (0..=cap).map(|d| vec![None; po.object.count(d)]).collect();
        let mut witness = None;
        for d in 0..=cap {
            let from_simplex = prims.iter().flat_map(|&tau| simplex.keys[d].iter().map(move |g| (tau, g)));
            let values_b = from_simplex.map(|(tau, g)| upper_at[d][&full.restrict(n, tau, g)]);
            let values_c = (0..lower.count(d)).map(|x| upper_at[d][&lower_incl.maps[d][x]]);
            let sources = po.from_b.maps[d].iter().zip(values_b).chain(po.from_c.maps[d].iter().zip(values_c));
            for (&p, v) in sources {
                match maps[d][p] {
                    None => maps[d][p] = Some(v),
                    Some(w) if w != v => {
                        witness
                            .get_or_insert_with(|| format!("pushout simplex {} has two images", po.object.name(d, p)));
                    }
                    _ => {}
                }
            }
        }
        let maps: Vec<Vec<usize>> = maps.into_iter().map(|m| m.into_iter().map(|v| v.unwrap()).collect()).collect();
        let comparison = SimplicialMap { source: po.object.clone(), target: upper.clone(), maps };
        if witness.is_none() {
            for d in 0..=cap {
                let mut hits = vec![0usize; upper.count(d)];
                for &y in &comparison.maps[d] {
                    hits[y] += 1;
                }
                if let Some(y) = hits.iter().position(|&h| h != 1) {
                    witness = Some(format!("simplex {} of K^({n}) is hit {} times", upper.name(d, y), hits[y]));
                    break;
                }
            }
        }
        Ok(PushoutCheck {
            n,
            primitives: prims.len(),
            pushout_counts: po.object.counts(),
            stage_counts: upper.counts(),
            witness,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutCheck {
    pub n: usize,
    pub primitives: usize,
    pub pushout_counts: Vec<usize>,
    pub stage_counts: Vec<usize>,
    pub witness: Option<String>,
}

impl PushoutCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{product_category, validate_category};

    #[test]
    fn nerve_of_arrow() {
        let n = nerve(&FinCategory::chain(1), 2).sset;
        assert_eq!(n.counts(), vec![2, 3, 4]);
        assert_eq!(n.nondegenerate(1).len(), 1);
        assert!(n.is_valid());
    }

    #[test]
    fn nerve_of_discrete_and_zigzag() {
        let n = nerve(&FinCategory::discrete(2), 2).sset;
        assert!(n.nondegenerate(1).is_empty() && n.nondegenerate(2).is_empty());
        let z = nerve(&FinCategory::zigzag(), 1).sset;
        assert_eq!((z.count(0), z.nondegenerate(1).len()), (4, 3));
    }

    #[test]
    fn simplex_counts_match_monotone_maps() {
        for n in 0..4 {
            let d = delta(n, 3).sset;
            assert!(d.is_valid());
            for m in 0..=3 {
                assert_eq!(d.count(m), monotone_maps(m, n).len());
            }
        }
    }

    #[test]
    fn restriction_matches_keys() {
        let d = delta(3, 3);
        for m in 0..=3 {
            for x in 0..d.sset.count(m) {
                for g in monotone_maps(2, m) {
                    let key: Vec<usize> = g.iter().map(|&j| d.keys[m][x][j]).collect();
                    assert_eq!(d.sset.restrict(m, x, &g), d.index[2][&key]);
                }
            }
        }
    }

    #[test]
    fn horns() {
        let h2 = generalized_inner_horn(2, 2).sset;
        let nd1: Vec<&str> = h2.nondegenerate(1).iter().map(|&e| h2.name(1, e)).collect();
        assert_eq!(nd1, vec!["01", "12"]);
        assert!(h2.nondegenerate(2).is_empty());
        let h3 = generalized_inner_horn(3, 3).sset;
        let nd2: Vec<&str> = h3.nondegenerate(2).iter().map(|&e| h3.name(2, e)).collect();
        assert_eq!(nd2, vec!["012", "123"]);
        for n in 1..=5 {
            assert_eq!(generalized_inner_horn(n, 1).sset.count(0), n + 1);
        }
    }

    #[test]
    fn quiver_sets_are_valid_and_one_skeletal() {
        for b in Builtin::ALL {
            let k = b.build(4);
            assert!(k.is_valid(), "{:?}: {:?}", b, k.violations());
            assert!(k.is_one_skeletal());
        }
        assert!(!delta(2, 2).sset.is_one_skeletal());
    }

    #[test]
    fn product_of_intervals() {
        let d1 = delta(1, 2).sset;
        let p = product_sset(&d1, &d1).unwrap().sset;
        assert_eq!((p.count(0), p.count(1)), (4, 9));
        assert_eq!(p.nondegenerate(2).len(), 2);
        assert!(p.is_valid());
        let pt = delta(0, 2).sset;
        assert_eq!(product_sset(&pt, &d1).unwrap().sset.counts(), d1.counts());
    }

    #[test]
    fn nerve_preserves_products() {
        // Nerves of posets are determined by vertex sequences.
        let (i, j) = (FinCategory::chain(1), FinCategory::chain(2));
        let lhs = product_sset(&nerve(&i, 3).sset, &nerve(&j, 3).sset).unwrap();
        let prod = product_category(&i, &j);
        assert!(validate_category(&prod).passed());
        let rhs = nerve(&prod, 3);
        assert_eq!(lhs.sset.counts(), rhs.sset.counts());
        for n in 0..=3 {
            let left: std::collections::BTreeSet<Vec<usize>> = (0..lhs.sset.count(n))
                .map(|t| {
                    let vs = lhs.sset.vertices(n, t);
                    vs.iter().map(|&v| lhs.keys[0][v].0 * j.num_objects() + lhs.keys[0][v].1).collect()
                })
                .collect();
            let right: std::collections::BTreeSet<Vec<usize>> =
                (0..rhs.sset.count(n)).map(|t| rhs.sset.vertices(n, t)).collect();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn homotopy_categories() {
        let hk = homotopy_category(&Builtin::Spine2.build(3), 5).unwrap();
        assert_eq!(hk.category.num_morphisms(), 3 + 3);
        let nerve2 = nerve(&FinCategory::chain(2), 2).sset;
        let h = homotopy_category(&nerve2, 4).unwrap();
        assert_eq!(h.category.num_morphisms(), 6);
        assert_eq!(h.category.hom(0, 2).len(), 1);
        let pt = homotopy_category(&Builtin::Delta0.build(2), 3).unwrap();
        assert_eq!(pt.category.num_morphisms(), 1);
    }

    #[test]
    fn unit_of_spine_hits_rank_at_most_one() {
        let nh = NhK::new(Arc::new(Builtin::Spine2.build(3)), 6).unwrap();
        let unit = nh.unit_map();
        assert!(unit.violations().is_empty());
        assert!(unit.is_injective());
        for d in 0..=3 {
            let image: std::collections::BTreeSet<usize> = unit.maps[d].iter().copied().collect();
            let low: std::collections::BTreeSet<usize> =
                (0..nh.sset().count(d)).filter(|&s| nh.rank_of_simplex(d, s) <= 1).collect();
            assert_eq!(image, low);
        }
    }

    #[test]
    fn parallel_edges_give_two_rank_one_morphisms() {
        let nh = NhK::new(Arc::new(Builtin::Parallel.build(3)), 4).unwrap();
        assert!(nh.unit_map().is_injective());
        let rank_one = (0..nh.hk.category.num_morphisms()).filter(|&m| nh.morphism_rank(m) == 1).count();
        assert_eq!(rank_one, 2);
    }

    #[test]
    fn spine_factorization() {
        let nh = NhK::new(Arc::new(Builtin::Spine2.build(3)), 6).unwrap();
        let full = nh.sset();
        let long = (0..full.count(1)).find(|&e| nh.rank_of_simplex(1, e) == 2).unwrap();
        let (tau, f) = nh.primitive_factorization(1, long).unwrap();
        assert_eq!(f, vec![0, 2]);
        assert!(nh.is_primitive(2, tau));
        assert_eq!(nh.all_primitive_factorizations(1, long), vec![(tau, f)]);
        assert_eq!(nh.primitives(2).len(), 1);
    }

    #[test]
    fn filtration_of_spine3() {
        let nh = NhK::new(Arc::new(Builtin::Spine3.build(3)), 6).unwrap();
        assert_eq!(nh.max_rank(), 3);
        for n in 1..=3 {
            let check = nh.verify_pushout(n).unwrap();
            assert!(check.passed(), "{check:?}");
        }
        assert_eq!(nh.stage(3).0.counts(), nh.sset().counts());
    }

    #[test]
    fn non_one_skeletal_is_rejected() {
        let err = NhK::new(Arc::new(delta(2, 2).sset), 4).unwrap_err();
        assert!(matches!(err, Error::NotOneSkeletal { dim: 2, .. }));
    }
}
