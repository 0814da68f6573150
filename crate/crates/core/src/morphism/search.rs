//! Exhaustive search for uniform powerfree morphisms, reported as sets of
//! generating words up to symmetry.
//!
//! A uniform morphism is fixed by its set of images up to a permutation of
//! the source letters. Renaming target letters and reversing every image
//! preserve powerfreeness, which gives the symmetry group used for orbits.

use std::collections::HashMap;

use serde::Serialize;

use super::verify::{
    bean_kpowerfree_sufficient, bean_squarefree_sufficient, cubefree_binary_test,
    find_image_failure, kpowerfree_uniform_test, squarefree_uniform_test, UniformMethod,
};
use super::Morphism;
use crate::error::{Error, Result};
use crate::words::{powerfree_words, Alphabet, FreenessSpec, Word};

/// A symmetry: rename target letters by `perm`, then optionally reverse.
pub type Symmetry = (Vec<u8>, bool);

fn permutations(n: u8) -> Vec<Vec<u8>> {
    fn rec(prefix: &mut Vec<u8>, n: u8, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n as usize {
            out.push(prefix.clone());
            return;
        }
        for a in 0..n {
            if !prefix.contains(&a) {
                prefix.push(a);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

/// Target-letter permutations times `{identity, reversal}`, identity first.
pub fn symmetry_group(target: Alphabet) -> Vec<Symmetry> {
    let perms = permutations(target.size() as u8);
    [false, true]
        .into_iter()
        .flat_map(|rev| perms.iter().map(move |p| (p.clone(), rev)))
        .collect()
}

fn apply_symmetry(set: &[Word], (perm, rev): &Symmetry) -> Vec<Word> {
    let mut out: Vec<Word> = set
        .iter()
        .map(|w| {
            let p = w.permute(perm);
            if *rev {
                p.reverse()
            } else {
                p
            }
        })
        .collect();
    out.sort();
    out
}

/// Lexicographically least sorted image of `set` under the symmetry group.
pub fn canonicalize_generating_set(set: &[Word], target: Alphabet) -> Vec<Word> {
    symmetry_group(target)
        .iter()
        .map(|g| apply_symmetry(set, g))
        .min()
        .unwrap_or_default()
}

/// The distinct images of a generating set under the symmetry group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: Vec<Word>,
    pub members: Vec<Vec<Word>>,
    /// Binary targets only: the set is fixed by `0 <-> 1`.
    pub complement_invariant: bool,
    pub reversal_invariant: bool,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

pub fn orbit_of(set: &[Word], target: Alphabet) -> Orbit {
    let mut sorted = set.to_vec();
    sorted.sort();
    let mut members: Vec<Vec<Word>> = symmetry_group(target)
        .iter()
        .map(|g| apply_symmetry(set, g))
        .collect();
    members.sort();
    members.dedup();
    let complement_invariant =
        target.size() == 2 && apply_symmetry(set, &(vec![1, 0], false)) == sorted;
    let identity: Vec<u8> = target.letters().collect();
    let reversal_invariant = apply_symmetry(set, &(identity, true)) == sorted;
    Orbit {
        representative: members[0].clone(),
        members,
        complement_invariant,
        reversal_invariant,
    }
}

/// What a generating set must satisfy to be reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// The morphism is `k`-powerfree (decided exactly).
    Exact,
    /// The morphism satisfies the sufficient criterion.
    BeanSufficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Stop after this many sets.
    pub limit: Option<usize>,
    /// Upper bound on candidate words of length `l`.
    pub max_candidates: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            limit: None,
            max_candidates: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub k: u32,
    pub source_size: usize,
    pub target_size: usize,
    pub length: usize,
    pub criterion: Criterion,
    /// Every generating set found, each sorted; one entry per morphism up to
    /// source-letter permutation.
    pub sets: Vec<Vec<Word>>,
    /// One orbit per class under the symmetry group, ordered by
    /// representative.
    pub orbits: Vec<Orbit>,
    /// True when the search stopped at the requested limit.
    pub truncated: bool,
}

impl SearchResult {
    pub fn count_up_to_source_permutation(&self) -> usize {
        self.sets.len()
    }

    pub fn representatives(&self) -> Vec<Vec<Word>> {
        self.orbits
            .iter()
            .map(|o| o.representative.clone())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

struct Search<'a> {
    k: u32,
    source_size: usize,
    target: Alphabet,
    criterion: Criterion,
    candidates: &'a [Word],
    /// `compatible[i][j]`: the two-letter morphism `{wi, wj}` passes.
    compatible: Vec<Vec<bool>>,
    cache: HashMap<Vec<Word>, bool>,
    found: Vec<Vec<Word>>,
    limit: Option<usize>,
}

impl Search<'_> {
    fn morphism(&self, idx: &[usize]) -> Morphism {
        let images = idx.iter().map(|&i| self.candidates[i].clone()).collect();
        Morphism::new(
            Alphabet::new(idx.len()).expect("nonempty"),
            self.target,
            images,
        )
        .expect("candidates are over the target")
    }

    /// Sound rejection test for a partial set: a short failing source word.
    fn cheap_reject(&self, m: &Morphism) -> Result<bool> {
        let max_len = (2 * self.k as usize + 1).min(7);
        Ok(find_image_failure(m, self.k, 1, max_len)?.is_some())
    }

    fn passes(&mut self, idx: &[usize]) -> Result<bool> {
        let m = self.morphism(idx);
        match self.criterion {
            Criterion::BeanSufficient => Ok(bean(&m, self.k)?),
            Criterion::Exact => {
                if idx.len() >= 3 && self.cheap_reject(&m)? {
                    return Ok(false);
                }
                if idx.len() < self.source_size {
                    return Ok(true);
                }
                let key = canonicalize_generating_set(m.images(), self.target);
                if let Some(&v) = self.cache.get(&key) {
                    return Ok(v);
                }
                let v = exact(&m, self.k)?;
                self.cache.insert(key, v);
                Ok(v)
            }
        }
    }

    fn rec(&mut self, chosen: &mut Vec<usize>, allowed: &[usize]) -> Result<bool> {
        if chosen.len() == self.source_size {
            let mut set: Vec<Word> = chosen.iter().map(|&i| self.candidates[i].clone()).collect();
            set.sort();
            self.found.push(set);
            return Ok(self.limit.is_some_and(|l| self.found.len() >= l));
        }
        let need = self.source_size - chosen.len();
        for (pos, &i) in allowed.iter().enumerate() {
            if allowed.len() - pos < need {
                break;
            }
            chosen.push(i);
            let check = chosen.len() >= 3 || chosen.len() == self.source_size;
            if !check || self.passes(chosen)? {
                let next: Vec<usize> = allowed[pos + 1..]
                    .iter()
                    .copied()
                    .filter(|&j| self.compatible[i][j])
                    .collect();
                if self.rec(chosen, &next)? {
                    chosen.pop();
                    return Ok(true);
                }
            }
            chosen.pop();
        }
        Ok(false)
    }
}

fn bean(m: &Morphism, k: u32) -> Result<bool> {
    Ok(if k == 2 {
        bean_squarefree_sufficient(m).is_sufficient()
    } else {
        bean_kpowerfree_sufficient(m, k)?.is_sufficient()
    })
}

fn exact(m: &Morphism, k: u32) -> Result<bool> {
    match (k, m.source().size()) {
        (2, _) => squarefree_uniform_test(m),
        (3, 2) => cubefree_binary_test(m),
        (_, 1) => kpowerfree_uniform_test(m, k, UniformMethod::LengthBound(None)),
        _ => kpowerfree_uniform_test(m, k, UniformMethod::TestSet),
    }
}

fn run_search(
    k: u32,
    source_size: usize,
    target: Alphabet,
    length: usize,
    criterion: Criterion,
    options: SearchOptions,
) -> Result<SearchResult> {
    let spec = FreenessSpec::new(k)?;
    if source_size == 0 || length == 0 {
        return Err(Error::DegenerateInput(
            "need a nonempty source alphabet and length".into(),
        ));
    }
    let candidates: Vec<Word> = powerfree_words(target, spec, length)
        .into_iter()
        .filter(|w| w.pow(k as usize - 1).is_powerfree(spec))
        .collect();
    if candidates.len() > options.max_candidates {
        return Err(Error::ResourceLimit(format!(
            "{} candidate words exceed the limit of {}",
            candidates.len(),
            options.max_candidates
        )));
    }
    let mut search = Search {
        k,
        source_size,
        target,
        criterion,
        candidates: &candidates,
        compatible: Vec::new(),
        cache: HashMap::new(),
        found: Vec::new(),
        limit: options.limit,
    };
    let n = candidates.len();
    let mut compatible = vec![vec![false; n]; n];
    let singles: Vec<usize> = if criterion == Criterion::BeanSufficient {
        (0..n)
            .filter(|&i| bean(&search.morphism(&[i]), k).unwrap_or(false))
            .collect()
    } else {
        (0..n).collect()
    };
    if source_size >= 2 {
        for (a, &i) in singles.iter().enumerate() {
            for &j in &singles[a + 1..] {
                let m = search.morphism(&[i, j]);
                let ok = match criterion {
                    Criterion::Exact => exact(&m, k)?,
                    Criterion::BeanSufficient => bean(&m, k)?,
                };
                compatible[i][j] = ok;
                compatible[j][i] = ok;
            }
        }
    }
    search.compatible = compatible;
    let truncated = search.rec(&mut Vec::new(), &singles)?;
    let mut sets = std::mem::take(&mut search.found);
    sets.sort();
    let mut orbits: Vec<Orbit> = Vec::new();
    for set in &sets {
        let o = orbit_of(set, target);
        if !orbits.iter().any(|x| x.representative == o.representative) {
            orbits.push(o);
        }
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(SearchResult {
        k,
        source_size,
        target_size: target.size(),
        length,
        criterion,
        sets,
        orbits,
        truncated,
    })
}

/// All sets of `source_size` distinct `k`-powerfree target words of length
/// `length` whose morphism is `k`-powerfree.
pub fn search_uniform_generating_sets(
    k: u32,
    source_size: usize,
    target: Alphabet,
    length: usize,
    options: SearchOptions,
) -> Result<SearchResult> {
    run_search(k, source_size, target, length, Criterion::Exact, options)
}

/// Sets whose morphism satisfies the sufficient criterion.
pub fn search_bean_generating_sets(
    k: u32,
    source_size: usize,
    target: Alphabet,
    length: usize,
    options: SearchOptions,
) -> Result<SearchResult> {
    run_search(
        k,
        source_size,
        target,
        length,
        Criterion::BeanSufficient,
        options,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &[&str]) -> Vec<Word> {
        s.iter().map(|w| Word::parse(w).unwrap()).collect()
    }

    #[test]
    fn canonical_form_is_idempotent_and_orbit_invariant() {
        let set = words(&["001101", "101001", "100101"]);
        let c = canonicalize_generating_set(&set, Alphabet::BINARY);
        assert_eq!(canonicalize_generating_set(&c, Alphabet::BINARY), c);
        for g in symmetry_group(Alphabet::BINARY) {
            let image = apply_symmetry(&set, &g);
            assert_eq!(canonicalize_generating_set(&image, Alphabet::BINARY), c);
        }
        assert_eq!(symmetry_group(Alphabet::BINARY).len(), 4);
        assert_eq!(symmetry_group(Alphabet::TERNARY).len(), 12);
    }

    #[test]
    fn invariant_sets() {
        let w5 = Word::parse("010010110").unwrap();
        let w8 = Word::parse("011001001").unwrap();
        let c = |w: &Word| w.complement(Alphabet::BINARY).unwrap();
        let set = vec![w5.clone(), c(&w5), w8.clone(), c(&w8)];
        let orbit = orbit_of(&set, Alphabet::BINARY);
        assert!(orbit.complement_invariant);
        assert_eq!(orbit.size(), 2);
        let w9 = Word::parse("011010110").unwrap();
        assert_eq!(w9.reverse(), w9);
        assert!(orbit_of(&[w9], Alphabet::BINARY).reversal_invariant);
    }

    #[test]
    fn ternary_source_length_six() {
        let r = search_uniform_generating_sets(3, 3, Alphabet::BINARY, 6, SearchOptions::default())
            .unwrap();
        assert_eq!(r.count_up_to_source_permutation(), 12);
        assert_eq!(r.orbits.len(), 3);
        let expected: Vec<Vec<Word>> = [
            ["001011", "001101", "011001"],
            ["001101", "100101", "101001"],
            ["001101", "011001", "101001"],
        ]
        .iter()
        .map(|s| canonicalize_generating_set(&words(s), Alphabet::BINARY))
        .collect();
        for e in &expected {
            assert!(r.representatives().contains(e), "{e:?}");
        }
        let none =
            search_uniform_generating_sets(3, 3, Alphabet::BINARY, 5, SearchOptions::default())
                .unwrap();
        assert_eq!(none.count_up_to_source_permutation(), 0);
    }

    #[test]
    fn ternary_squarefree_search_hit_is_squarefree() {
        let first = (1..=13)
            .find_map(|len| {
                let options = SearchOptions {
                    limit: Some(1),
                    ..SearchOptions::default()
                };
                search_uniform_generating_sets(2, 3, Alphabet::TERNARY, len, options)
                    .unwrap()
                    .sets
                    .pop()
            })
            .expect("a uniform squarefree morphism on three letters exists");
        let m = Morphism::new(Alphabet::TERNARY, Alphabet::TERNARY, first).unwrap();
        assert!(super::super::squarefree_ternary_test(&m).unwrap());
        for len in 1..=12 {
            for w in powerfree_words(Alphabet::TERNARY, FreenessSpec::SQUAREFREE, len) {
                assert!(m.apply(&w).is_powerfree(FreenessSpec::SQUAREFREE));
            }
        }
    }

    #[test]
    fn bean_hits_are_exact_hits() {
        let r = search_bean_generating_sets(3, 2, Alphabet::BINARY, 8, SearchOptions::default())
            .unwrap();
        for set in &r.sets {
            let m = Morphism::new(Alphabet::BINARY, Alphabet::BINARY, set.clone()).unwrap();
            assert!(cubefree_binary_test(&m).unwrap(), "{m}");
        }
    }
}
