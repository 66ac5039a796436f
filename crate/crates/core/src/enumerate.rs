//! Group contexts (one `G_ω`, the universal group `U`, or the diagonal group
//! of a finite family), canonical element registries, balls and growth
//! functions, Schreier graphs and rigid-stabilizer witnesses.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gomega::{decompose_raw, BinVertex, GrigorchukGroup};
use crate::omega::{lambda_family, OmegaSeq};
use crate::universal::{a_perm, decompose_raw_u, HexVertex, UniversalGroup};
use crate::words::{reduced_words_up_to, Letter, Word};

pub const DEFAULT_HASH_LEVEL: usize = 8;
pub const DEFAULT_ELEMENT_CAP: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupContext {
    Single(OmegaSeq),
    Universal,
    /// Sorted, deduplicated, nonempty.
    Diagonal(Vec<OmegaSeq>),
}

impl GroupContext {
    pub fn diagonal(family: impl IntoIterator<Item = OmegaSeq>) -> Result<GroupContext> {
        let mut members: Vec<OmegaSeq> = family.into_iter().collect();
        members.sort();
        members.dedup();
        if members.is_empty() {
            return Err(Error::Precondition("diagonal family must be nonempty".into()));
        }
        Ok(GroupContext::Diagonal(members))
    }

    /// The diagonal group over `Λ_{r₁,…,r_k}`.
    pub fn lambda(r: &[u32]) -> Result<GroupContext> {
        GroupContext::diagonal(lambda_family(r)?.members)
    }

    /// Parses `omega:<prefix>|<period>`, `universal`, `diag:<seq>,<seq>,…`
    /// or `lambda:r1,r2,…`.
    pub fn parse(text: &str) -> Result<GroupContext> {
        let text = text.trim();
        let err = |reason: &str| Error::Parse {
            token: text.to_string(),
            reason: reason.to_string(),
        };
        if text == "universal" {
            return Ok(GroupContext::Universal);
        }
        let (kind, body) = text
            .split_once(':')
            .ok_or_else(|| err("expected omega:, diag:, lambda: or universal"))?;
        match kind {
            "omega" => Ok(GroupContext::Single(OmegaSeq::parse(body)?)),
            "diag" => {
                let members = body
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(OmegaSeq::parse)
                    .collect::<Result<Vec<_>>>()?;
                GroupContext::diagonal(members)
            }
            "lambda" => {
                let r = body
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        s.trim().parse::<u32>().map_err(|_| Error::Parse {
                            token: s.to_string(),
                            reason: "expected a positive integer".into(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                GroupContext::lambda(&r)
            }
            _ => Err(err("unknown context kind")),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            GroupContext::Single(w) => format!("omega:{w}"),
            GroupContext::Universal => "universal".into(),
            GroupContext::Diagonal(f) => {
                let parts: Vec<String> = f.iter().map(|w| w.to_text()).collect();
                format!("diag:{}", parts.join(","))
            }
        }
    }
}

impl fmt::Display for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for GroupContext {
    type Err = Error;
    fn from_str(s: &str) -> Result<GroupContext> {
        GroupContext::parse(s)
    }
}

enum Deciders {
    /// One `G_ω` per member; a single context has one member.
    Binary(Vec<GrigorchukGroup>),
    Universal(UniversalGroup),
}

/// A context together with its memoizing word-problem deciders.
pub struct ContextGroup {
    ctx: GroupContext,
    deciders: Deciders,
}

impl ContextGroup {
    pub fn new(ctx: GroupContext) -> ContextGroup {
        let deciders = match &ctx {
            GroupContext::Single(w) => Deciders::Binary(vec![GrigorchukGroup::new(w.clone())]),
            GroupContext::Universal => Deciders::Universal(UniversalGroup::new()),
            GroupContext::Diagonal(f) => Deciders::Binary(f.iter().cloned().map(GrigorchukGroup::new).collect()),
        };
        ContextGroup { ctx, deciders }
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        match &self.deciders {
            Deciders::Binary(gs) => gs.iter().all(|g| g.is_trivial(w)),
            Deciders::Universal(u) => u.is_trivial(w),
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    /// Level of `T₆` used for fingerprints when `hash_level` is requested:
    /// the smallest level with at least `2^hash_level` vertices.
    pub fn universal_level(hash_level: usize) -> usize {
        let target = 1u128 << hash_level;
        (1..).find(|&l| 6u128.pow(l as u32) >= target).unwrap()
    }

    /// Permutation of the fingerprint vertices induced by `w`. Members of a
    /// diagonal context occupy consecutive blocks.
    pub fn action(&self, w: &Word, hash_level: usize) -> Vec<u32> {
        match &self.deciders {
            Deciders::Binary(gs) => {
                let block = 1u32 << hash_level;
                let mut out = Vec::with_capacity(gs.len() << hash_level);
                for (k, g) in gs.iter().enumerate() {
                    out.extend(g.level_action(w, hash_level).into_iter().map(|i| i + k as u32 * block));
                }
                out
            }
            Deciders::Universal(u) => u.level_action(w, Self::universal_level(hash_level)),
        }
    }
}

pub fn equal_in(ctx: &GroupContext, u: &Word, v: &Word) -> bool {
    ContextGroup::new(ctx.clone()).equal(u, v)
}

fn action_key(perm: &[u32]) -> u64 {
    let mut h = DefaultHasher::new();
    perm.hash(&mut h);
    h.finish()
}

/// Distinct group elements keyed by action fingerprint, with exact equality
/// on collisions. Ids are dense and assigned in insertion order.
#[derive(Default)]
pub struct ElementRegistry {
    buckets: HashMap<u64, Vec<u32>>,
    reps: Vec<Word>,
}

impl ElementRegistry {
    pub fn new() -> ElementRegistry {
        ElementRegistry::default()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representative(&self, id: u32) -> &Word {
        &self.reps[id as usize]
    }

    pub fn representatives(&self) -> &[Word] {
        &self.reps
    }

    /// Id of an entry with ids `>= from` equal to `w` in the group.
    pub fn lookup(&self, group: &ContextGroup, key: u64, w: &Word, from: u32) -> Option<u32> {
        self.buckets
            .get(&key)?
            .iter()
            .copied()
            .filter(|&id| id >= from)
            .find(|&id| group.equal(&self.reps[id as usize], w))
    }

    /// Inserts without checking; callers look up first.
    pub fn insert(&mut self, key: u64, w: Word) -> u32 {
        let id = self.reps.len() as u32;
        self.buckets.entry(key).or_default().push(id);
        self.reps.push(w);
        id
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallOptions {
    pub hash_level: usize,
    pub element_cap: usize,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            hash_level: DEFAULT_HASH_LEVEL,
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }
}

/// `γ(0), …, γ(n)`. A truncated table stops at the last complete radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthTable {
    pub values: Vec<u64>,
    pub requested: usize,
    pub truncated: bool,
}

impl GrowthTable {
    pub fn gamma(&self, n: usize) -> Option<u64> {
        self.values.get(n).copied()
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_submultiplicative(&self) -> bool {
        let v = &self.values;
        (0..v.len()).all(|m| (0..v.len() - m).all(|n| v[m + n] <= v[m] * v[n]))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,gamma\n");
        for (n, g) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{g}\n"));
        }
        if self.truncated {
            out.push_str(&format!("# truncated before n={}\n", self.values.len()));
        }
        out
    }
}

pub struct Ball {
    pub table: GrowthTable,
    pub registry: ElementRegistry,
}

pub fn ball(ctx: &GroupContext, n: usize) -> GrowthTable {
    enumerate_ball(&ContextGroup::new(ctx.clone()), n, BallOptions::default()).table
}

/// Breadth-first closure of the ball of radius `n`.
///
/// Layer `k+1` is generated from the shortlex-sorted representatives of
/// layer `k` extended by `a < b < c < d`, so candidates arrive in shortlex
/// order and the first one seen for each element is its shortlex-minimal
/// geodesic. Keys and lookups against earlier layers run in parallel; new
/// ids are assigned sequentially in candidate order.
pub fn enumerate_ball(group: &ContextGroup, n: usize, opts: BallOptions) -> Ball {
    let gens: Vec<Vec<u32>> = Letter::ALL
        .iter()
        .map(|&x| group.action(&Word::letter(x), opts.hash_level))
        .collect();
    let identity = group.action(&Word::empty(), opts.hash_level);
    let mut registry = ElementRegistry::new();
    let root = registry.insert(action_key(&identity), Word::empty());
    let mut frontier = vec![(root, identity)];
    let mut values = vec![1u64];
    let mut truncated = false;

    for _ in 1..=n {
        let candidates: Vec<(Word, Vec<u32>, u64)> = frontier
            .par_iter()
            .flat_map_iter(|(id, perm)| {
                let rep = registry.representative(*id);
                let last = rep.letters().last().copied();
                Letter::ALL
                    .iter()
                    .filter(move |&&x| match last {
                        None => true,
                        Some(l) => l.is_a() != x.is_a(),
                    })
                    .map(|&x| {
                        let mut letters = rep.letters().to_vec();
                        letters.push(x);
                        let g = &gens[x.index()];
                        // (w·x)(v) = w(x(v))
                        let composed: Vec<u32> = g.iter().map(|&i| perm[i as usize]).collect();
                        let key = action_key(&composed);
                        (Word::reduce(letters), composed, key)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let known: Vec<bool> = candidates
            .par_iter()
            .map(|(w, _, key)| registry.lookup(group, *key, w, 0).is_some())
            .collect();
        let layer_start = registry.len() as u32;
        let mut next = Vec::new();
        for ((w, perm, key), old) in candidates.into_iter().zip(known) {
            if old || registry.lookup(group, key, &w, layer_start).is_some() {
                continue;
            }
            if registry.len() >= opts.element_cap {
                truncated = true;
                break;
            }
            let id = registry.insert(key, w);
            next.push((id, perm));
        }
        if truncated {
            break;
        }
        values.push(registry.len() as u64);
        frontier = next;
    }
    Ball {
        table: GrowthTable {
            values,
            requested: n,
            truncated,
        },
        registry,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthComparison {
    pub probe: u32,
    pub base: u64,
    pub extended: u64,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthLimitReport {
    pub r: Vec<u32>,
    pub n: usize,
    pub comparisons: Vec<GrowthComparison>,
}

impl GrowthLimitReport {
    pub fn all_equal(&self) -> bool {
        self.comparisons.iter().all(|c| c.equal)
    }
}

/// Compares `γ_{Λ_r}(n)` with `γ_{Λ_{r,x}}(n)` for every probe `x`, provided
/// `k + Σ rᵢ ≥ log₂(2n)`.
pub fn growth_limit_check(r: &[u32], n: usize, probes: &[u32], opts: BallOptions) -> Result<GrowthLimitReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let lhs = r.len() as u64 + r.iter().map(|&x| x as u64).sum::<u64>();
    // k + Σr ≥ log₂(2n)  ⟺  2^(k+Σr) ≥ 2n
    let holds = lhs >= 64 || (1u128 << lhs) >= 2 * n as u128;
    if !holds {
        return Err(Error::Precondition(format!(
            "threshold fails: k + sum(r) = {lhs} < log2(2n) = log2({})",
            2 * n
        )));
    }
    let gamma = |rs: &[u32]| -> Result<u64> {
        let group = ContextGroup::new(GroupContext::lambda(rs)?);
        let t = enumerate_ball(&group, n, opts).table;
        t.gamma(n)
            .ok_or_else(|| Error::Precondition(format!("ball of radius {n} exceeded the element cap")))
    };
    let base = gamma(r)?;
    let comparisons = probes
        .iter()
        .map(|&x| {
            let mut ext = r.to_vec();
            ext.push(x);
            let extended = gamma(&ext)?;
            Ok(GrowthComparison {
                probe: x,
                base,
                extended,
                equal: base == extended,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthLimitReport {
        r: r.to_vec(),
        n,
        comparisons,
    })
}

/// Schreier graph of a context on one level of its tree: `T₂` for a single
/// `G_ω`, `T₆` for `U`, and the subtree `T_Λ = ⋃ T_ω` for a diagonal family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierGraph {
    pub level: usize,
    pub vertices: Vec<String>,
    /// `targets[v][x]` is the image of vertex `v` under generator `x`.
    pub targets: Vec<[usize; 4]>,
    pub components: usize,
}

#[derive(Serialize)]
struct JsonVertex<'a> {
    id: &'a str,
    a: &'a str,
    b: &'a str,
    c: &'a str,
    d: &'a str,
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    level: usize,
    components: usize,
    vertices: Vec<JsonVertex<'a>>,
}

impl SchreierGraph {
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph schreier_level_{} {{\n", self.level);
        for (v, t) in self.vertices.iter().zip(&self.targets) {
            for x in Letter::ALL {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                    v,
                    self.vertices[t[x.index()]],
                    x.to_char()
                ));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let name = |i: usize| self.vertices[i].as_str();
        let vertices = self
            .vertices
            .iter()
            .zip(&self.targets)
            .map(|(v, t)| JsonVertex {
                id: v,
                a: name(t[0]),
                b: name(t[1]),
                c: name(t[2]),
                d: name(t[3]),
            })
            .collect();
        serde_json::to_string_pretty(&JsonGraph {
            level: self.level,
            components: self.components,
            vertices,
        })
        .expect("serializable")
    }
}

fn count_components(targets: &[[usize; 4]]) -> usize {
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut parent: Vec<usize> = (0..targets.len()).collect();
    let mut count = targets.len();
    for (v, t) in targets.iter().enumerate() {
        for &u in t {
            let (a, b) = (find(&mut parent, v), find(&mut parent, u));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
    }
    count
}

pub fn schreier(ctx: &GroupContext, level: usize) -> SchreierGraph {
    let gens: Vec<Word> = Letter::ALL.iter().map(|&x| Word::letter(x)).collect();
    let (vertices, targets): (Vec<String>, Vec<[usize; 4]>) = match ctx {
        GroupContext::Single(omega) => {
            let g = GrigorchukGroup::new(omega.clone());
            let vs: Vec<BinVertex> = BinVertex::all_at_level(level).collect();
            let targets = vs
                .iter()
                .map(|v| {
                    let mut t = [0; 4];
                    for (x, w) in gens.iter().enumerate() {
                        t[x] = g.act(w, v).index();
                    }
                    t
                })
                .collect();
            (vs.iter().map(BinVertex::to_text).collect(), targets)
        }
        GroupContext::Universal | GroupContext::Diagonal(_) => {
            let vs: Vec<HexVertex> = match ctx {
                GroupContext::Diagonal(family) => {
                    let mut vs: Vec<HexVertex> = family
                        .iter()
                        .flat_map(|w| BinVertex::all_at_level(level).map(move |v| HexVertex::lift(&v, w)))
                        .collect();
                    vs.sort_by_key(HexVertex::index);
                    vs.dedup();
                    vs
                }
                _ => HexVertex::all_at_level(level).collect(),
            };
            let position: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, v)| (v.index(), i)).collect();
            let u = UniversalGroup::new();
            let targets = vs
                .iter()
                .map(|v| {
                    let mut t = [0; 4];
                    for (x, w) in gens.iter().enumerate() {
                        t[x] = position[&u.act(w, v).index()];
                    }
                    t
                })
                .collect();
            (vs.iter().map(HexVertex::to_text).collect(), targets)
        }
    };
    let components = count_components(&targets);
    SchreierGraph {
        level,
        vertices,
        targets,
        components,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeVertex {
    Bin(BinVertex),
    Hex(HexVertex),
}

/// `(image index, section)` for every vertex of `level`, indexed like
/// `BinVertex::index`. Sections live at shift `level`.
fn portrait_bin(w: &Word, omega: &OmegaSeq, level: usize) -> Vec<(usize, Word)> {
    let mut cur = vec![(0usize, w.clone())];
    for depth in 0..level {
        let symbol = omega.at(depth);
        let mut next = Vec::with_capacity(cur.len() * 2);
        for (img, g) in cur {
            let (swaps, s0, s1) = decompose_raw(&g, symbol);
            next.push((2 * img + swaps as usize, s0));
            next.push((2 * img + !swaps as usize, s1));
        }
        cur = next;
    }
    cur
}

fn portrait_hex(w: &Word, level: usize) -> Vec<(usize, Word)> {
    let mut cur = vec![(0usize, w.clone())];
    for _ in 0..level {
        let mut next = Vec::with_capacity(cur.len() * 6);
        for (img, g) in cur {
            let (swaps, sections) = decompose_raw_u(&g);
            for (x, s) in sections.into_iter().enumerate() {
                next.push((6 * img + if swaps { a_perm(x) } else { x }, s));
            }
        }
        cur = next;
    }
    cur
}

/// Shortlex-first word of length `≤ max_len` supported in the subtree below
/// `v` and acting nontrivially there within `depth_cap` levels of the root.
///
/// Triviality outside the subtree is decided exactly: the word must fix the
/// level of `v` and have trivial sections at every other vertex of it.
/// `Ok(None)` means the budget ran out.
pub fn rist_witness(ctx: &GroupContext, v: &TreeVertex, max_len: usize, depth_cap: usize) -> Result<Option<Word>> {
    match (ctx, v) {
        (GroupContext::Single(omega), TreeVertex::Bin(v)) => {
            let m = v.level();
            if depth_cap < m {
                return Ok(None);
            }
            let below = GrigorchukGroup::new(omega.shift_by(m));
            let target = v.index();
            let inside_moves = |s: &Word| {
                let perm = below.level_action(s, depth_cap - m);
                perm.iter().enumerate().any(|(i, &p)| p as usize != i)
            };
            Ok(reduced_words_up_to(max_len).into_iter().find(|w| {
                let portrait = portrait_bin(w, omega, m);
                portrait
                    .iter()
                    .enumerate()
                    .all(|(i, (img, s))| *img == i && (i == target || below.is_trivial(s)))
                    && inside_moves(&portrait[target].1)
            }))
        }
        (GroupContext::Universal, TreeVertex::Hex(v)) => {
            let m = v.level();
            if depth_cap < m {
                return Ok(None);
            }
            let u = UniversalGroup::new();
            let target = v.index();
            let inside_moves = |s: &Word| {
                let perm = u.level_action(s, depth_cap - m);
                perm.iter().enumerate().any(|(i, &p)| p as usize != i)
            };
            Ok(reduced_words_up_to(max_len).into_iter().find(|w| {
                let portrait = portrait_hex(w, m);
                portrait
                    .iter()
                    .enumerate()
                    .all(|(i, (img, s))| *img == i && (i == target || u.is_trivial(s)))
                    && inside_moves(&portrait[target].1)
            }))
        }
        (GroupContext::Diagonal(_), _) => Err(Error::UnsupportedContext(
            "rigid stabilizer search is implemented for a single G_omega and for U".into(),
        )),
        _ => Err(Error::InvalidArgument("vertex does not belong to the context's tree".into())),
    }
}
