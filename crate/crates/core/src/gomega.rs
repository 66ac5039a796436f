//! The groups `G_ω` acting on the binary rooted tree.
//!
//! For `x ∈ {b, c, d}` the generator `x_ω` fixes the first level, acts below
//! `0` by the selector `β/ζ/δ(ω₁) ∈ {a, ε}` and below `1` by `x_{τω}`. Words
//! are read as compositions with the rightmost letter applied first, so
//! sections obey `(gh)_x = g_{h(x)} · h_x`.

use std::collections::HashMap;
use std::fmt;

use dashmap::DashMap;

use crate::error::Error;
use crate::omega::OmegaSeq;
use crate::words::{Letter, Word, WordBuilder};

/// Tree level used to bound element orders from below before probing powers.
pub const ORDER_PROBE_LEVEL: usize = 12;

/// A vertex of the binary tree, as the path of letters from the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinVertex {
    pub path: Vec<u8>,
}

impl BinVertex {
    pub fn root() -> BinVertex {
        BinVertex { path: Vec::new() }
    }

    pub fn new(path: Vec<u8>) -> Result<BinVertex, Error> {
        if path.iter().any(|&x| x > 1) {
            return Err(Error::InvalidArgument("binary vertex letters must be 0 or 1".into()));
        }
        Ok(BinVertex { path })
    }

    pub fn level(&self) -> usize {
        self.path.len()
    }

    /// The vertex at `level` whose letters are the binary digits of `index`,
    /// most significant first.
    pub fn from_index(index: usize, level: usize) -> BinVertex {
        BinVertex {
            path: (0..level).map(|k| ((index >> (level - 1 - k)) & 1) as u8).collect(),
        }
    }

    pub fn index(&self) -> usize {
        self.path.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn all_at_level(level: usize) -> impl Iterator<Item = BinVertex> {
        (0..1usize << level).map(move |i| BinVertex::from_index(i, level))
    }

    pub fn is_prefix_of(&self, other: &BinVertex) -> bool {
        other.path.starts_with(&self.path)
    }

    pub fn parse(text: &str) -> Result<BinVertex, Error> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Ok(BinVertex::root());
        }
        text.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse {
                    token: text.to_string(),
                    reason: format!("invalid binary letter {c:?}"),
                }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|path| BinVertex { path })
    }

    pub fn to_text(&self) -> String {
        if self.path.is_empty() {
            "e".into()
        } else {
            self.path.iter().map(|&b| (b'0' + b) as char).collect()
        }
    }
}

impl fmt::Debug for BinVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinVertex({})", self.to_text())
    }
}

/// First-level wreath recursion of a word in `G_ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionDecomp2 {
    pub swaps: bool,
    pub sec0: Word,
    pub sec1: Word,
    /// `τω`, the parameter of the group the sections live in.
    pub context: OmegaSeq,
}

impl SectionDecomp2 {
    pub fn section(&self, x: u8) -> &Word {
        if x == 0 {
            &self.sec0
        } else {
            &self.sec1
        }
    }
}

/// Whether the selector `β/ζ/δ(symbol)` for `letter ∈ {b,c,d}` is `a` (otherwise ε).
#[inline]
pub(crate) fn selector_is_a(letter: Letter, symbol: u8) -> bool {
    // β(2) = ζ(1) = δ(0) = e; every other entry is a.
    symbol as usize != 3 - letter.index()
}

/// The table `β` (for `b`), `ζ` (for `c`), `δ` (for `d`).
pub fn selector_table(letter: Letter, symbol: u8) -> Result<Word, Error> {
    if letter.is_a() {
        return Err(Error::InvalidArgument("the selector table is defined for b, c, d only".into()));
    }
    if symbol > 2 {
        return Err(Error::InvalidArgument(format!("omega symbol {symbol} out of range")));
    }
    Ok(if selector_is_a(letter, symbol) {
        Word::letter(Letter::A)
    } else {
        Word::empty()
    })
}

/// `(swaps, sec0, sec1)` of `w` when the current parameter letter is `symbol`.
pub(crate) fn decompose_raw(w: &Word, symbol: u8) -> (bool, Word, Word) {
    let mut swaps = false;
    let mut s0 = WordBuilder::new();
    let mut s1 = WordBuilder::new();
    for &y in w.letters() {
        if y.is_a() {
            swaps = !swaps;
            std::mem::swap(&mut s0, &mut s1);
        } else {
            if selector_is_a(y, symbol) {
                s0.push(Letter::A);
            }
            s1.push(y);
        }
    }
    (swaps, s0.finish(), s1.finish())
}

pub fn decompose_g(w: &Word, omega: &OmegaSeq) -> SectionDecomp2 {
    let (swaps, sec0, sec1) = decompose_raw(w, omega.first());
    SectionDecomp2 {
        swaps,
        sec0,
        sec1,
        context: omega.shift(),
    }
}

pub fn act_g(w: &Word, omega: &OmegaSeq, v: &BinVertex) -> BinVertex {
    let mut path = v.path.clone();
    let p = omega.as_periodic();
    act_in_place(w, p, 0, &mut path);
    BinVertex { path }
}

fn act_in_place(w: &Word, omega: &crate::periodic::Periodic, mut phase: usize, path: &mut [u8]) {
    let mut g = w.clone();
    for bit in path.iter_mut() {
        if g.is_empty() {
            break;
        }
        let (swaps, s0, s1) = decompose_raw(&g, omega.at(phase));
        let x = *bit;
        if swaps {
            *bit ^= 1;
        }
        g = if x == 0 { s0 } else { s1 };
        phase = omega.next_phase(phase);
    }
}

pub fn is_trivial_g(w: &Word, omega: &OmegaSeq) -> bool {
    GrigorchukGroup::new(omega.clone()).is_trivial(w)
}

pub fn equal_g(u: &Word, v: &Word, omega: &OmegaSeq) -> bool {
    GrigorchukGroup::new(omega.clone()).equal(u, v)
}

pub fn order_g(w: &Word, omega: &OmegaSeq, cap: u64) -> Order {
    GrigorchukGroup::new(omega.clone()).order(w, cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Unknown,
}

/// `G_ω` for one eventually periodic `ω`, with a memoized word-problem solver.
///
/// Phases index the finite shift orbit of `ω`: phase `i` stands for `τ^i ω`.
/// The memo table is shared between threads; inserts are idempotent.
pub struct GrigorchukGroup {
    omega: OmegaSeq,
    /// `gen_trivial[phase][letter]`: whether the generator is trivial in `G_{τ^phase ω}`.
    gen_trivial: Vec<[bool; 4]>,
    memo: DashMap<(Word, u32), bool>,
}

impl GrigorchukGroup {
    pub fn new(omega: OmegaSeq) -> GrigorchukGroup {
        let p = omega.as_periodic();
        let gen_trivial = (0..p.orbit_len())
            .map(|phase| {
                let occurring = p.letters_from(phase);
                let mut t = [false; 4];
                for &x in &Letter::KLEIN {
                    t[x.index()] = occurring.iter().all(|&s| !selector_is_a(x, s));
                }
                t
            })
            .collect();
        GrigorchukGroup {
            omega,
            gen_trivial,
            memo: DashMap::new(),
        }
    }

    pub fn omega(&self) -> &OmegaSeq {
        &self.omega
    }

    pub(crate) fn symbol(&self, phase: usize) -> u8 {
        self.omega.at(phase)
    }

    pub(crate) fn next_phase(&self, phase: usize) -> usize {
        self.omega.as_periodic().next_phase(phase)
    }

    pub fn decompose(&self, w: &Word) -> SectionDecomp2 {
        decompose_g(w, &self.omega)
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.is_trivial_at(w, 0)
    }

    /// Word problem in `G_{τ^phase ω}`.
    pub fn is_trivial_at(&self, w: &Word, phase: usize) -> bool {
        match w.len() {
            0 => true,
            1 => {
                let l = w.letters()[0];
                !l.is_a() && self.gen_trivial[phase][l.index()]
            }
            _ => {
                let key = (w.clone(), phase as u32);
                if let Some(v) = self.memo.get(&key) {
                    return *v;
                }
                let (swaps, s0, s1) = decompose_raw(w, self.symbol(phase));
                let next = self.next_phase(phase);
                let result = !swaps && self.is_trivial_at(&s0, next) && self.is_trivial_at(&s1, next);
                self.memo.insert(key, result);
                result
            }
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    pub fn act(&self, w: &Word, v: &BinVertex) -> BinVertex {
        let mut path = v.path.clone();
        act_in_place(w, self.omega.as_periodic(), 0, &mut path);
        BinVertex { path }
    }

    /// The permutation induced on level `level`, indexed by `BinVertex::index`.
    pub fn level_action(&self, w: &Word, level: usize) -> Vec<u32> {
        let mut cache = HashMap::new();
        self.level_action_rec(w, 0, level, &mut cache)
    }

    fn level_action_rec(
        &self,
        w: &Word,
        phase: usize,
        level: usize,
        cache: &mut HashMap<(Word, usize, usize), Vec<u32>>,
    ) -> Vec<u32> {
        let size = 1usize << level;
        if w.is_empty() || level == 0 {
            return (0..size as u32).collect();
        }
        let key = (w.clone(), phase, level);
        if let Some(p) = cache.get(&key) {
            return p.clone();
        }
        let (swaps, s0, s1) = decompose_raw(w, self.symbol(phase));
        let next = self.next_phase(phase);
        let half = size / 2;
        let mut out = vec![0u32; size];
        for (c, s) in [(0usize, &s0), (1usize, &s1)] {
            let sub = self.level_action_rec(s, next, level - 1, cache);
            let target = (c ^ swaps as usize) * half;
            for (j, &img) in sub.iter().enumerate() {
                out[c * half + j] = (target + img as usize) as u32;
            }
        }
        cache.insert(key, out.clone());
        out
    }

    /// Smallest `n ≤ cap` with `wⁿ = 1`.
    ///
    /// The order of the action on level [`ORDER_PROBE_LEVEL`] divides the
    /// order of `w`, so only its multiples are tested.
    pub fn order(&self, w: &Word, cap: u64) -> Order {
        if w.is_empty() || self.is_trivial(w) {
            return Order::Finite(1);
        }
        let step = match permutation_order(&self.level_action(w, ORDER_PROBE_LEVEL), cap) {
            Some(m) => m,
            None => return Order::Unknown,
        };
        let block = w.pow(step);
        let mut current = block.clone();
        let mut n = step;
        while n <= cap {
            if self.is_trivial(&current) {
                return Order::Finite(n);
            }
            n += step;
            current = current.concat(&block);
        }
        Order::Unknown
    }
}

/// Order of a permutation, or `None` once it exceeds `cap`.
pub(crate) fn permutation_order(perm: &[u32], cap: u64) -> Option<u64> {
    let mut seen = vec![false; perm.len()];
    let mut order: u64 = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        order = lcm(order, len);
        if order > cap {
            return None;
        }
    }
    Some(order)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::reduced_words_up_to;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn om(s: &str) -> OmegaSeq {
        OmegaSeq::parse(s).unwrap()
    }

    /// Independent evaluation: apply generators one at a time, rightmost first,
    /// straight from the recursive definitions.
    fn oracle_act(word: &Word, omega: &OmegaSeq, v: &[u8]) -> Vec<u8> {
        let mut path = v.to_vec();
        for &l in word.letters().iter().rev() {
            if path.is_empty() {
                break;
            }
            if l.is_a() {
                path[0] ^= 1;
                continue;
            }
            // x_ω walks down 1s; at the first 0 (depth k) it applies the selector
            // for ω_{k+1} to the remaining path.
            if let Some(k) = path.iter().position(|&b| b == 0) {
                if selector_is_a(l, omega.at(k)) && k + 1 < path.len() {
                    path[k + 1] ^= 1;
                }
            }
        }
        path
    }

    fn moves_something(word: &Word, omega: &OmegaSeq, level: usize) -> bool {
        BinVertex::all_at_level(level).any(|v| oracle_act(word, omega, &v.path) != v.path)
    }

    #[test]
    fn selector_examples() {
        assert_eq!(selector_table(Letter::B, 0).unwrap(), w("a"));
        assert_eq!(selector_table(Letter::D, 0).unwrap(), Word::empty());
        assert_eq!(selector_table(Letter::C, 1).unwrap(), Word::empty());
        assert_eq!(selector_table(Letter::B, 2).unwrap(), Word::empty());
        assert_eq!(selector_table(Letter::C, 2).unwrap(), w("a"));
        assert_eq!(selector_table(Letter::D, 1).unwrap(), w("a"));
        assert!(selector_table(Letter::A, 0).is_err());
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_g(&w("b"), &om("|0"));
        assert_eq!((d.swaps, d.sec0.clone(), d.sec1.clone()), (false, w("a"), w("b")));
        let d = decompose_g(&w("a"), &om("|012"));
        assert_eq!((d.swaps, d.sec0.clone(), d.sec1.clone()), (true, Word::empty(), Word::empty()));
        let d = decompose_g(&Word::empty(), &om("|012"));
        assert!(!d.swaps && d.sec0.is_empty() && d.sec1.is_empty());
        assert_eq!(d.context, om("|120"));
    }

    #[test]
    fn act_examples() {
        let any = om("0|12");
        assert_eq!(act_g(&w("a"), &any, &BinVertex::parse("0").unwrap()).to_text(), "1");
        let v = BinVertex::parse("0110").unwrap();
        assert_eq!(act_g(&Word::empty(), &any, &v), v);
        assert_eq!(act_g(&w("b"), &om("|012"), &BinVertex::parse("01").unwrap()).to_text(), "00");
    }

    #[test]
    fn triviality_examples() {
        assert!(is_trivial_g(&Word::empty(), &om("|012")));
        assert!(is_trivial_g(&w("d"), &om("|0")));
        assert!(is_trivial_g(&w("c"), &om("|1")));
        assert!(is_trivial_g(&w("b"), &om("|2")));
        assert!(!is_trivial_g(&w("d"), &om("1|0")));
        assert!(!is_trivial_g(&w("b"), &om("|012")));
        // Cross-oracle for the fixpoint case.
        for level in 1..=10 {
            assert!(!moves_something(&w("d"), &om("|0"), level));
        }
    }

    #[test]
    fn equality_examples() {
        let g = GrigorchukGroup::new(om("|012"));
        assert!(g.equal(&w("abac"), &w("abac")));
        assert!(g.equal(&w("bc"), &w("d")));
        assert!(!g.equal(&w("a"), &w("b")));
    }

    #[test]
    fn order_examples() {
        let omega = om("|012");
        assert_eq!(order_g(&w("a"), &omega, 8), Order::Finite(2));
        assert_eq!(order_g(&Word::empty(), &omega, 8), Order::Finite(1));
        // Oracle: smallest power of ab fixing levels 1..12, confirmed exactly.
        let ab = w("ab");
        let oracle = (1..=64u64)
            .find(|&n| !(1..=12).any(|lvl| moves_something(&ab.pow(n), &omega, lvl)))
            .unwrap();
        assert!(is_trivial_g(&ab.pow(oracle), &omega));
        assert_eq!(oracle, 16);
        assert_eq!(order_g(&ab, &omega, 64), Order::Finite(oracle));
        assert_eq!(order_g(&ab, &omega, 8), Order::Unknown);
        // Generators are involutions when nontrivial.
        for l in Letter::ALL {
            assert_eq!(order_g(&Word::letter(l), &omega, 8), Order::Finite(2));
        }
        assert_eq!(order_g(&w("d"), &om("|0"), 8), Order::Finite(1));
    }

    #[test]
    fn level_action_matches_pointwise_action() {
        let g = GrigorchukGroup::new(om("01|2"));
        for word in reduced_words_up_to(5) {
            let perm = g.level_action(&word, 6);
            for v in BinVertex::all_at_level(6) {
                assert_eq!(perm[v.index()] as usize, g.act(&word, &v).index());
            }
        }
    }

    #[test]
    fn decider_agrees_with_depth_capped_oracle() {
        for omega in [om("|012"), om("|0"), om("0|12"), om("2|01")] {
            let g = GrigorchukGroup::new(omega.clone());
            for word in reduced_words_up_to(6) {
                let moves = moves_something(&word, &omega, 12);
                assert_eq!(g.is_trivial(&word), !moves, "{word} in {omega}");
            }
        }
    }

    #[test]
    fn involution_law() {
        for omega in [om("|012"), om("|0"), om("1|20")] {
            for l in Letter::ALL {
                let x = Word::letter(l);
                assert!(is_trivial_g(&Word::reduce([l, l]), &omega));
                assert!(equal_g(&x, &x.inverse(), &omega));
            }
        }
    }

    fn word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..4).prop_map(Letter::from_index), 0..24).prop_map(Word::reduce)
    }

    fn omega() -> impl Strategy<Value = OmegaSeq> {
        (
            prop::collection::vec(0u8..3, 0..4),
            prop::collection::vec(0u8..3, 1..4),
        )
            .prop_map(|(a, b)| OmegaSeq::new(a, b).unwrap())
    }

    proptest! {
        #[test]
        fn decomposition_is_a_homomorphism(u in word(), v in word(), om in omega()) {
            let du = decompose_g(&u, &om);
            let dv = decompose_g(&v, &om);
            let duv = decompose_g(&u.concat(&v), &om);
            prop_assert_eq!(duv.swaps, du.swaps ^ dv.swaps);
            for x in 0..2u8 {
                let hx = x ^ dv.swaps as u8;
                let expected = du.section(hx).concat(dv.section(x));
                prop_assert_eq!(duv.section(x), &expected);
            }
        }

        #[test]
        fn action_is_composition(u in word(), v in word(), om in omega(),
                                 path in prop::collection::vec(0u8..2, 0..10)) {
            let vert = BinVertex { path: path.clone() };
            let lhs = act_g(&u.concat(&v), &om, &vert);
            let rhs = act_g(&u, &om, &act_g(&v, &om, &vert));
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(lhs.path, oracle_act(&u.concat(&v), &om, &path));
        }

        #[test]
        fn reconstruction_matches_direct_evaluation(u in word(), om in omega(),
                                                    path in prop::collection::vec(0u8..2, 1..10)) {
            let d = decompose_g(&u, &om);
            let x = path[0];
            let below = act_g(d.section(x), &d.context, &BinVertex { path: path[1..].to_vec() });
            let mut expected = vec![x ^ d.swaps as u8];
            expected.extend(below.path);
            prop_assert_eq!(act_g(&u, &om, &BinVertex { path }).path, expected);
        }
    }
}
