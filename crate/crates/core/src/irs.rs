//! Stabilizers of boundary rays of the binary tree in `G_ω`, their finite
//! fingerprints, and empirical invariant random subgroups obtained by
//! sampling rays.
//!
//! Rays are eventually periodic, so membership `w ∈ St(ξ)` is decided
//! exactly: the walk down `ξ` carries the state (section, ω-phase,
//! ray-phase), which ranges over a finite set once sections stop shrinking.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gomega::decompose_raw;
use crate::omega::OmegaSeq;
use crate::periodic::Periodic;
use crate::words::{reduced_words_up_to, Word};

/// Walk length after which a membership is reported undecided.
pub const DEFAULT_DEPTH_CAP: usize = 128;

/// An eventually periodic ray of the binary tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray(Periodic);

impl Ray {
    pub fn new(prefix: Vec<u8>, period: Vec<u8>) -> Result<Ray> {
        if prefix.iter().chain(&period).any(|&x| x > 1) {
            return Err(Error::InvalidArgument("ray letters must be 0 or 1".into()));
        }
        Periodic::new(prefix, period).map(Ray)
    }

    /// `prefix · 111…`
    pub fn with_ones_tail(prefix: Vec<u8>) -> Ray {
        Ray::new(prefix, vec![1]).expect("binary prefix")
    }

    pub fn parse(text: &str) -> Result<Ray> {
        Periodic::parse(text, 2).map(Ray)
    }

    pub fn as_periodic(&self) -> &Periodic {
        &self.0
    }

    pub fn at(&self, i: usize) -> u8 {
        self.0.at(i)
    }

    pub fn take(&self, n: usize) -> Vec<u8> {
        self.0.take(n)
    }

    pub fn to_text(&self) -> String {
        self.0.to_text()
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ray({})", self.to_text())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    In,
    Out,
    /// The walk reached this depth without a decision.
    Undecided(usize),
}

impl Membership {
    pub fn is_decided(self) -> bool {
        !matches!(self, Membership::Undecided(_))
    }

    pub fn symbol(self) -> char {
        match self {
            Membership::In => '1',
            Membership::Out => '0',
            Membership::Undecided(_) => '?',
        }
    }
}

/// A membership verdict with the number of ray letters it depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision {
    pub status: Membership,
    pub depth: usize,
    /// Decided by revisiting a state, which assumes the ray's periodic tail.
    pub from_cycle: bool,
}

pub fn decide(w: &Word, omega: &OmegaSeq, ray: &Ray, depth_cap: usize) -> Decision {
    let om = omega.as_periodic();
    let r = ray.as_periodic();
    let mut g = w.clone();
    let (mut p, mut q) = (0usize, 0usize);
    let mut seen = HashSet::new();
    for depth in 0.. {
        if g.is_empty() {
            return Decision {
                status: Membership::In,
                depth,
                from_cycle: false,
            };
        }
        if depth >= depth_cap {
            return Decision {
                status: Membership::Undecided(depth_cap),
                depth: depth_cap,
                from_cycle: false,
            };
        }
        if !seen.insert((g.clone(), p, q)) {
            return Decision {
                status: Membership::In,
                depth,
                from_cycle: true,
            };
        }
        let (swaps, s0, s1) = decompose_raw(&g, om.at(p));
        if swaps {
            return Decision {
                status: Membership::Out,
                depth: depth + 1,
                from_cycle: false,
            };
        }
        g = if r.at(q) == 0 { s0 } else { s1 };
        p = om.next_phase(p);
        q = r.next_phase(q);
    }
    unreachable!()
}

/// Whether `w` fixes the ray `ξ` in `G_ω`.
pub fn stabilizes(w: &Word, omega: &OmegaSeq, ray: &Ray, depth_cap: usize) -> Membership {
    decide(w, omega, ray, depth_cap).status
}

/// The image `g·ξ`, computed exactly.
pub fn push_ray(g: &Word, omega: &OmegaSeq, ray: &Ray) -> Ray {
    let om = omega.as_periodic();
    let r = ray.as_periodic();
    let mut section = g.clone();
    let (mut p, mut q) = (0usize, 0usize);
    let mut out = Vec::new();
    let mut seen: HashMap<(Word, usize, usize), usize> = HashMap::new();
    loop {
        // Past the support the ω-phase no longer matters.
        let state = (section.clone(), if section.is_empty() { 0 } else { p }, q);
        if let Some(&start) = seen.get(&state) {
            let period = out.split_off(start);
            return Ray::new(out, period).expect("binary letters");
        }
        seen.insert(state, out.len());
        let x = r.at(q);
        let (swaps, s0, s1) = decompose_raw(&section, om.at(p));
        out.push(x ^ swaps as u8);
        section = if x == 0 { s0 } else { s1 };
        p = om.next_phase(p);
        q = r.next_phase(q);
    }
}

/// The nonempty reduced words of length `≤ max_len`, in shortlex order.
pub fn fingerprint_words(max_len: usize) -> Vec<Word> {
    reduced_words_up_to(max_len).into_iter().filter(|w| !w.is_empty()).collect()
}

/// Membership of every word of [`fingerprint_words`] in `St(ξ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub max_len: usize,
    pub bits: Vec<Membership>,
    /// Ray letters each decision depends on; `None` when it relies on the tail.
    pub depths: Vec<Option<usize>>,
}

impl Fingerprint {
    pub fn to_bits(&self) -> String {
        self.bits.iter().map(|m| m.symbol()).collect()
    }

    pub fn undecided(&self) -> usize {
        self.bits.iter().filter(|m| !m.is_decided()).count()
    }

    /// Pairs of In entries whose product is Out, plus In entries whose
    /// inverse is Out. Empty for every genuine stabilizer.
    pub fn closure_violations(&self, words: &[Word]) -> Vec<(Word, Word)> {
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let status = |w: &Word| index.get(w).map(|&i| self.bits[i]);
        let ins: Vec<&Word> = words
            .iter()
            .zip(&self.bits)
            .filter(|(_, m)| **m == Membership::In)
            .map(|(w, _)| w)
            .collect();
        let mut bad = Vec::new();
        for &u in &ins {
            if status(&u.inverse()) == Some(Membership::Out) {
                bad.push((u.clone(), u.inverse()));
            }
            for &v in &ins {
                if status(&u.concat(v)) == Some(Membership::Out) {
                    bad.push((u.clone(), v.clone()));
                }
            }
        }
        bad
    }
}

pub fn fingerprint(omega: &OmegaSeq, ray: &Ray, max_len: usize, depth_cap: usize) -> Fingerprint {
    fingerprint_of(&fingerprint_words(max_len), omega, ray, max_len, depth_cap)
}

fn fingerprint_of(words: &[Word], omega: &OmegaSeq, ray: &Ray, max_len: usize, depth_cap: usize) -> Fingerprint {
    let (bits, depths) = words
        .iter()
        .map(|w| {
            let d = decide(w, omega, ray, depth_cap);
            (d.status, (!d.from_cycle).then_some(d.depth))
        })
        .unzip();
    Fingerprint { max_len, bits, depths }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrsMetadata {
    pub omega: String,
    pub max_len: usize,
    pub prefix_depth: usize,
    pub depth_cap: usize,
    /// `None` for exhaustive cylinder enumeration.
    pub seed: Option<u64>,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrsSample {
    pub ray: Ray,
    pub fingerprint: Fingerprint,
    pub weight: f64,
}

/// Fingerprints of sampled rays; weights sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalIrs {
    pub omega: OmegaSeq,
    pub meta: IrsMetadata,
    pub samples: Vec<IrsSample>,
}

#[derive(Serialize)]
struct SampleRecord {
    ray: String,
    bits: String,
    weight: f64,
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    summary: &'a IrsMetadata,
    undecided_fraction: f64,
    decided_within_prefix: f64,
}

impl EmpiricalIrs {
    fn entries(&self) -> usize {
        self.samples.iter().map(|s| s.fingerprint.bits.len()).sum()
    }

    pub fn undecided_fraction(&self) -> f64 {
        let undecided: usize = self.samples.iter().map(|s| s.fingerprint.undecided()).sum();
        undecided as f64 / self.entries().max(1) as f64
    }

    /// Fraction of entries decided from the sampled prefix alone.
    pub fn decided_within_prefix(&self) -> f64 {
        let d = self.meta.prefix_depth;
        let within: usize = self
            .samples
            .iter()
            .map(|s| {
                let f = &s.fingerprint;
                f.bits
                    .iter()
                    .zip(&f.depths)
                    .filter(|(m, depth)| m.is_decided() && depth.is_some_and(|x| x <= d))
                    .count()
            })
            .sum();
        within as f64 / self.entries().max(1) as f64
    }

    /// One record per sample, then a summary record.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.samples {
            let rec = SampleRecord {
                ray: s.ray.to_text(),
                bits: s.fingerprint.to_bits(),
                weight: s.weight,
            };
            out.push_str(&serde_json::to_string(&rec).expect("serializable"));
            out.push('\n');
        }
        let summary = SummaryRecord {
            summary: &self.meta,
            undecided_fraction: self.undecided_fraction(),
            decided_within_prefix: self.decided_within_prefix(),
        };
        out.push_str(&serde_json::to_string(&summary).expect("serializable"));
        out.push('\n');
        out
    }
}

/// Ray `index` of a seeded run: `prefix_depth` uniform bits, then `111…`.
pub fn sample_ray(seed: u64, index: u64, prefix_depth: usize) -> Ray {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let prefix = (0..prefix_depth).map(|_| rng.random::<bool>() as u8).collect();
    Ray::with_ones_tail(prefix)
}

fn build_irs(omega: &OmegaSeq, rays: Vec<Ray>, meta: IrsMetadata) -> EmpiricalIrs {
    let words = fingerprint_words(meta.max_len);
    let weight = 1.0 / rays.len() as f64;
    let samples = rays
        .into_par_iter()
        .map(|ray| IrsSample {
            fingerprint: fingerprint_of(&words, omega, &ray, meta.max_len, meta.depth_cap),
            ray,
            weight,
        })
        .collect();
    EmpiricalIrs {
        omega: omega.clone(),
        meta,
        samples,
    }
}

pub fn sample_irs(
    omega: &OmegaSeq,
    n: usize,
    prefix_depth: usize,
    max_len: usize,
    depth_cap: usize,
    seed: u64,
) -> Result<EmpiricalIrs> {
    if n == 0 {
        return Err(Error::Precondition("sample count must be at least 1".into()));
    }
    let rays = (0..n as u64).map(|i| sample_ray(seed, i, prefix_depth)).collect();
    let meta = IrsMetadata {
        omega: omega.to_text(),
        max_len,
        prefix_depth,
        depth_cap,
        seed: Some(seed),
        samples: n,
    };
    Ok(build_irs(omega, rays, meta))
}

/// Every depth-`prefix_depth` cylinder, represented by `prefix · 111…`, with
/// weight `2^-prefix_depth`.
pub fn cylinder_irs(omega: &OmegaSeq, prefix_depth: usize, max_len: usize, depth_cap: usize) -> EmpiricalIrs {
    let rays: Vec<Ray> = (0..1usize << prefix_depth)
        .map(|i| {
            Ray::with_ones_tail(
                (0..prefix_depth)
                    .map(|k| ((i >> (prefix_depth - 1 - k)) & 1) as u8)
                    .collect(),
            )
        })
        .collect();
    let meta = IrsMetadata {
        omega: omega.to_text(),
        max_len,
        prefix_depth,
        depth_cap,
        seed: None,
        samples: rays.len(),
    };
    build_irs(omega, rays, meta)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub tv: f64,
    /// Coordinates decided in every original and pushed sample.
    pub coordinates_used: usize,
    pub coordinates_masked: usize,
}

/// Total-variation distance between the fingerprint laws of `ξ` and `g·ξ`,
/// restricted to coordinates decided in every sample of both.
pub fn conj_invariance(e: &EmpiricalIrs, g: &Word) -> InvarianceReport {
    let words = fingerprint_words(e.meta.max_len);
    let pushed: Vec<Fingerprint> = e
        .samples
        .par_iter()
        .map(|s| {
            let ray = push_ray(g, &e.omega, &s.ray);
            fingerprint_of(&words, &e.omega, &ray, e.meta.max_len, e.meta.depth_cap)
        })
        .collect();
    let originals: Vec<&Fingerprint> = e.samples.iter().map(|s| &s.fingerprint).collect();
    let used: Vec<usize> = (0..words.len())
        .filter(|&i| {
            originals.iter().all(|f| f.bits[i].is_decided()) && pushed.iter().all(|f| f.bits[i].is_decided())
        })
        .collect();
    let project = |f: &Fingerprint| -> String { used.iter().map(|&i| f.bits[i].symbol()).collect() };
    let mut counts: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for f in &originals {
        counts.entry(project(f)).or_default().0 += 1;
    }
    for f in &pushed {
        counts.entry(project(f)).or_default().1 += 1;
    }
    let diff: u64 = counts.values().map(|&(x, y)| x.abs_diff(y)).sum();
    InvarianceReport {
        tv: diff as f64 / (2 * e.samples.len()) as f64,
        coordinates_used: used.len(),
        coordinates_masked: words.len() - used.len(),
    }
}

/// Shortlex-first word whose decided memberships in `St(ξ)` and `St(ρ)` differ.
/// `Ok(None)` means the budget ran out.
pub fn separate_stabilizers(
    omega: &OmegaSeq,
    xi: &Ray,
    rho: &Ray,
    max_len: usize,
    depth_cap: usize,
) -> Result<Option<Word>> {
    if xi == rho {
        return Err(Error::Precondition(format!("rays are equal: {xi}")));
    }
    Ok(reduced_words_up_to(max_len).into_iter().find(|w| {
        let s = stabilizes(w, omega, xi, depth_cap);
        let t = stabilizes(w, omega, rho, depth_cap);
        s.is_decided() && t.is_decided() && s != t
    }))
}

/// Shortlex-first word lying in exactly one of `St_{G_ω}(ξ)` and
/// `St_{G_η}(ρ)`, both memberships decided. Since `U` maps onto each `G_ω`,
/// such a word separates the lifted subgroups of `U`.
pub fn lifted_separation(
    omega: &OmegaSeq,
    eta: &OmegaSeq,
    xi: &Ray,
    rho: &Ray,
    max_len: usize,
    depth_cap: usize,
) -> Result<Option<Word>> {
    if omega.equivalent(eta) {
        return Err(Error::Precondition(format!("{omega} and {eta} are equivalent")));
    }
    Ok(reduced_words_up_to(max_len).into_iter().find(|w| {
        let s = stabilizes(w, omega, xi, depth_cap);
        let t = stabilizes(w, eta, rho, depth_cap);
        s.is_decided() && t.is_decided() && (s == Membership::In) != (t == Membership::In)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gomega::{act_g, BinVertex};
    use crate::words::Letter;
    use proptest::prelude::*;

    fn om(s: &str) -> OmegaSeq {
        OmegaSeq::parse(s).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn ray(s: &str) -> Ray {
        Ray::parse(s).unwrap()
    }

    /// Prefix of `ξ` of length `n` fixed by `w`, via the vertex action.
    fn fixes_prefix(word: &Word, omega: &OmegaSeq, r: &Ray, n: usize) -> bool {
        let v = BinVertex { path: r.take(n) };
        act_g(word, omega, &v) == v
    }

    #[test]
    fn ray_forms() {
        assert_eq!(Ray::with_ones_tail(vec![0, 1, 1]), ray("0|1"));
        assert_eq!(Ray::with_ones_tail(vec![]).to_text(), "|1");
        assert!(Ray::parse("2|1").is_err());
    }

    #[test]
    fn stabilizes_examples() {
        for o in [om("|012"), om("|0"), om("0|12")] {
            for r in [ray("|1"), ray("01|0"), ray("|01")] {
                assert_eq!(stabilizes(&Word::empty(), &o, &r, 0), Membership::In);
                assert_eq!(stabilizes(&w("a"), &o, &r, 1), Membership::Out);
            }
        }
        assert_eq!(stabilizes(&w("b"), &om("|012"), &ray("|1"), 16), Membership::In);
        assert_eq!(stabilizes(&w("b"), &om("|012"), &ray("|1"), 1), Membership::Undecided(1));
    }

    #[test]
    fn decisions_match_vertex_action() {
        let o = om("|012");
        for r in [ray("|1"), ray("0110|1"), ray("|10"), ray("1|0")] {
            for word in reduced_words_up_to(6) {
                match stabilizes(&word, &o, &r, 64) {
                    Membership::In => assert!(fixes_prefix(&word, &o, &r, 30), "{word} {r}"),
                    Membership::Out => assert!(!fixes_prefix(&word, &o, &r, 30), "{word} {r}"),
                    Membership::Undecided(_) => panic!("undecided {word} {r}"),
                }
            }
        }
    }

    #[test]
    fn fingerprint_examples() {
        let f = fingerprint(&om("|0"), &ray("|0"), 1, 16);
        assert_eq!(f.bits.len(), 4);
        assert_eq!(f.bits[0], Membership::Out);
        assert_eq!(f.bits[3], Membership::In);
        let f = fingerprint(&om("|012"), &ray("|1"), 1, 16);
        assert_eq!(f.to_bits(), "0111");
    }

    #[test]
    fn push_matches_vertex_action() {
        let o = om("0|12");
        for r in [ray("|1"), ray("0110|1"), ray("|10")] {
            for g in reduced_words_up_to(5) {
                let image = push_ray(&g, &o, &r);
                let v = BinVertex { path: r.take(25) };
                assert_eq!(act_g(&g, &o, &v).path, image.take(25), "{g} {r}");
            }
        }
    }

    #[test]
    fn sampling_examples() {
        let e = sample_irs(&om("|012"), 1, 0, 3, 32, 7).unwrap();
        assert_eq!(e.samples.len(), 1);
        assert_eq!(e.samples[0].ray, ray("|1"));
        assert_eq!(e.samples[0].weight, 1.0);
        // Nothing about 111… is visible in an empty prefix.
        assert_eq!(e.decided_within_prefix(), 0.0);
        assert!(sample_irs(&om("|012"), 0, 4, 3, 32, 7).is_err());
        let a = sample_irs(&om("|012"), 50, 12, 4, 48, 99).unwrap();
        let b = sample_irs(&om("|012"), 50, 12, 4, 48, 99).unwrap();
        assert_eq!(a.to_json_lines(), b.to_json_lines());
        let c = sample_irs(&om("|012"), 50, 12, 4, 48, 100).unwrap();
        assert_ne!(a.to_json_lines(), c.to_json_lines());
        let text = a.to_json_lines();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 51);
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["bits"].as_str().unwrap().len(), fingerprint_words(4).len());
        let last: serde_json::Value = serde_json::from_str(lines[50]).unwrap();
        assert_eq!(last["summary"]["samples"], 50);
        let total: f64 = a.samples.iter().map(|s| s.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_conjugation_is_invariant() {
        let e = sample_irs(&om("|012"), 200, 10, 4, 48, 3).unwrap();
        assert_eq!(conj_invariance(&e, &Word::empty()).tv, 0.0);
    }

    #[test]
    fn cylinder_conjugation_by_a_is_exact() {
        let e = cylinder_irs(&om("|012"), 6, 4, 64);
        let r = conj_invariance(&e, &w("a"));
        assert_eq!(r.coordinates_masked, 0);
        assert_eq!(r.tv, 0.0);
    }

    #[test]
    fn sampled_fingerprints_are_closed() {
        let words = fingerprint_words(4);
        let e = sample_irs(&om("|012"), 100, 12, 4, 64, 11).unwrap();
        for s in &e.samples {
            assert!(s.fingerprint.closure_violations(&words).is_empty(), "{}", s.ray);
            for (word, m) in words.iter().zip(&s.fingerprint.bits) {
                if *m == Membership::In {
                    assert!(fixes_prefix(word, &e.omega, &s.ray, 24));
                }
            }
        }
    }

    #[test]
    fn separation_examples() {
        let o = om("|012");
        assert!(separate_stabilizers(&o, &ray("|1"), &ray("|1"), 4, 16).is_err());
        let found = separate_stabilizers(&o, &ray("|0"), &ray("|1"), 8, 64).unwrap().expect("witness");
        assert_ne!(found, w("a"));
        let found = separate_stabilizers(&o, &ray("0|1"), &ray("1|1"), 8, 64).unwrap();
        assert!(found.is_some());
        assert!(lifted_separation(&o, &om("|120"), &ray("|1"), &ray("|1"), 4, 16).is_err());
        let found = lifted_separation(&om("|0"), &o, &ray("|1"), &ray("10|1"), 1, 64).unwrap();
        assert_eq!(found, Some(w("b")));
        assert_eq!(stabilizes(&w("d"), &o, &ray("10|1"), 64), Membership::Out);
        let found = lifted_separation(&om("|0"), &o, &ray("|1"), &ray("|1"), 12, 64).unwrap();
        assert!(found.is_some());
        // d is trivial in G_{000…}, hence in every stabilizer there.
        assert_eq!(stabilizes(&w("d"), &om("|0"), &ray("0101|1"), 64), Membership::In);
    }

    #[test]
    fn undecided_fraction_shrinks_with_depth_cap() {
        let o = om("|012");
        let e = |cap| sample_irs(&o, 40, 16, 4, cap, 5).unwrap().undecided_fraction();
        let fractions: Vec<f64> = [1, 2, 4, 8, 16, 32, 64].iter().map(|&c| e(c)).collect();
        assert!(fractions.windows(2).all(|p| p[0] >= p[1]), "{fractions:?}");
        assert_eq!(*fractions.last().unwrap(), 0.0);
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0usize..4, 0..max).prop_map(|v| Word::reduce(v.into_iter().map(Letter::from_index)))
    }

    fn ray_strategy() -> impl Strategy<Value = Ray> {
        (prop::collection::vec(0u8..2, 0..8), prop::collection::vec(0u8..2, 1..3))
            .prop_map(|(a, b)| Ray::new(a, b).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn stabilizer_equivariance(g in word_strategy(6), x in word_strategy(6), r in ray_strategy()) {
            let o = om("|012");
            let lhs = stabilizes(&x, &o, &push_ray(&g, &o, &r), 96);
            let rhs = stabilizes(&g.inverse().concat(&x).concat(&g), &o, &r, 96);
            if lhs.is_decided() && rhs.is_decided() {
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn push_is_a_bijection(g in word_strategy(6), r in ray_strategy()) {
            let o = om("0|12");
            prop_assert_eq!(push_ray(&g.inverse(), &o, &push_ray(&g, &o, &r)), r);
        }
    }
}
