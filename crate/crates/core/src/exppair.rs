//! Exponent pairs and the van der Corput A and B processes, in exact arithmetic.
//!
//! A pair `(p, q)` is admissible when `0 <= p <= 1/2 <= q <= 1`. Process words are
//! written as in the literature, `A^2BA^2B(0,1)` meaning `A(A(B(A(A(B(0,1))))))`:
//! the rightmost symbol is applied first.

use std::fmt;

use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corekit::{rat, rational_to_f64, Rational};
use crate::error::{Error, Result};

/// Default cap on process-word length.
pub const MAX_WORD_LEN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Process {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProcessWord {
    symbols: Vec<Process>,
}

impl ProcessWord {
    pub fn new(symbols: Vec<Process>) -> Result<Self> {
        Self::with_limit(symbols, MAX_WORD_LEN)
    }

    pub fn with_limit(symbols: Vec<Process>, limit: usize) -> Result<Self> {
        if symbols.len() > limit {
            return Err(Error::domain(format!(
                "process word of length {} exceeds the limit {limit}",
                symbols.len()
            )));
        }
        Ok(Self { symbols })
    }

    pub fn empty() -> Self {
        Self {
            symbols: Vec::new(),
        }
    }

    /// Parses words such as `"AABAAB"` or `"A^2BA^2B"`; whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let mut symbols = Vec::new();
        let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(c) = chars.next() {
            let sym = match c {
                'A' | 'a' => Process::A,
                'B' | 'b' => Process::B,
                _ => {
                    return Err(Error::Parse(format!(
                        "unexpected {c:?} in process word {s:?}"
                    )))
                }
            };
            let mut reps = 1usize;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                reps = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("missing exponent after '^' in {s:?}")))?;
                if reps > MAX_WORD_LEN {
                    return Err(Error::domain(format!(
                        "exponent {reps} exceeds the word limit"
                    )));
                }
            }
            symbols.extend(std::iter::repeat_n(sym, reps));
        }
        Self::new(symbols)
    }

    pub fn symbols(&self) -> &[Process] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Run-length form, e.g. `A^2BA^2B`.
    pub fn compact(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.symbols.len() {
            let sym = self.symbols[i];
            let run = self.symbols[i..].iter().take_while(|&&s| s == sym).count();
            out.push(if sym == Process::A { 'A' } else { 'B' });
            if run > 1 {
                out.push_str(&format!("^{run}"));
            }
            i += run;
        }
        out
    }
}

impl fmt::Display for ProcessWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            f.write_str(if *s == Process::A { "A" } else { "B" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Seed,
    /// `word` applied to a pair whose own provenance is `base`.
    Word {
        word: ProcessWord,
        base: Box<Provenance>,
    },
    Theorem2 {
        k: u32,
    },
}

/// An admissible exponent pair. Equality compares `(p, q)` only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentPair {
    p: Rational,
    q: Rational,
    provenance: Provenance,
}

impl PartialEq for ExponentPair {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q
    }
}

impl Eq for ExponentPair {}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.p, self.q)
    }
}

fn is_admissible(p: &Rational, q: &Rational) -> bool {
    let half = rat(1, 2);
    !p.is_negative() && p <= &half && &half <= q && q <= &Rational::one()
}

impl ExponentPair {
    pub fn new(p: Rational, q: Rational) -> Result<Self> {
        if !is_admissible(&p, &q) {
            return Err(Error::domain(format!(
                "({p}, {q}) violates 0 <= p <= 1/2 <= q <= 1"
            )));
        }
        Ok(Self {
            p,
            q,
            provenance: Provenance::Seed,
        })
    }

    /// The trivial pair `(0, 1)`.
    pub fn trivial() -> Self {
        Self {
            p: Rational::zero(),
            q: Rational::one(),
            provenance: Provenance::Seed,
        }
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(&self.p, &self.q)
    }

    fn derived(p: Rational, q: Rational, sym: Process, from: &ExponentPair) -> Self {
        let provenance = match &from.provenance {
            Provenance::Word { word, base } => {
                let mut symbols = Vec::with_capacity(word.len() + 1);
                symbols.push(sym);
                symbols.extend_from_slice(word.symbols());
                Provenance::Word {
                    word: ProcessWord { symbols },
                    base: base.clone(),
                }
            }
            other => Provenance::Word {
                word: ProcessWord { symbols: vec![sym] },
                base: Box::new(other.clone()),
            },
        };
        Self { p, q, provenance }
    }
}

/// `A(p, q) = (p / (2p + 2), (p + q + 1) / (2p + 2))`.
pub fn process_a(pair: &ExponentPair) -> ExponentPair {
    let den = &pair.p * rat(2, 1) + rat(2, 1);
    let p = &pair.p / &den;
    let q = (&pair.p + &pair.q + Rational::one()) / den;
    ExponentPair::derived(p, q, Process::A, pair)
}

/// `B(p, q) = (q - 1/2, p + 1/2)`.
pub fn process_b(pair: &ExponentPair) -> ExponentPair {
    let half = rat(1, 2);
    let p = &pair.q - &half;
    let q = &pair.p + half;
    ExponentPair::derived(p, q, Process::B, pair)
}

/// Applies `word` to `seed`, rightmost symbol first.
pub fn eval_word(word: &ProcessWord, seed: &ExponentPair) -> ExponentPair {
    word.symbols()
        .iter()
        .rev()
        .fold(seed.clone(), |acc, sym| match sym {
            Process::A => process_a(&acc),
            Process::B => process_b(&acc),
        })
}

/// The pair `p = 2/((k-1)^2 (k+2))`, `q = 1 - (3k-2)/(k(k-1)(k+2))`, valid for `k >= 3`.
///
/// The arbitrarily small `epsilon` added to `q` is not stored; see [`pair_bound_with_slack`].
pub fn theorem2_pair(k: u32) -> Result<ExponentPair> {
    if k < 3 {
        return Err(Error::domain(format!(
            "theorem-2 pairs need k >= 3, got {k}"
        )));
    }
    let k = i64::from(k);
    let p = rat(2, (k - 1) * (k - 1) * (k + 2));
    let q = Rational::one() - rat(3 * k - 2, k * (k - 1) * (k + 2));
    Ok(ExponentPair {
        p,
        q,
        provenance: Provenance::Theorem2 { k: k as u32 },
    })
}

/// The pair `(1/(2^k - 2), (2^k - k - 1)/(2^k - 2))` implied by the classical k-th
/// derivative test.
pub fn classical_pair(k: u32) -> Result<ExponentPair> {
    if !(2..=62).contains(&k) {
        return Err(Error::domain(format!(
            "classical pair needs 2 <= k <= 62, got {k}"
        )));
    }
    let d = (1i64 << k) - 2;
    ExponentPair::new(rat(1, d), rat(d + 1 - i64::from(k), d))
}

/// `(T/N)^p N^q` in floating point.
pub fn pair_bound(pair: &ExponentPair, t: f64, n: f64) -> Result<f64> {
    pair_bound_with_slack(pair, t, n, 0.0)
}

/// `(T/N)^p N^(q + slack)`; `slack` stands in for the epsilon of non-sharp pairs.
pub fn pair_bound_with_slack(pair: &ExponentPair, t: f64, n: f64, slack: f64) -> Result<f64> {
    if !(n >= 1.0 && t >= n) {
        return Err(Error::domain(format!(
            "pair bound needs T >= N >= 1, got T={t}, N={n}"
        )));
    }
    let p = rational_to_f64(&pair.p);
    let q = rational_to_f64(&pair.q) + slack;
    Ok((t / n).powf(p) * n.powf(q))
}

/// Linear objective `alpha * p + beta * q`, minimized by [`search_words`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub alpha: Rational,
    pub beta: Rational,
}

impl Objective {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        Self { alpha, beta }
    }

    pub fn score(&self, pair: &ExponentPair) -> Rational {
        &self.alpha * &pair.p + &self.beta * &pair.q
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub word: ProcessWord,
    pub pair: ExponentPair,
    pub score: Rational,
    pub evaluated: usize,
}

/// Exhaustively evaluates every word of length `<= max_len` on `(0, 1)` and returns the
/// minimizer of `objective`, preferring shorter words and then lexicographic order (A < B).
pub fn search_words(max_len: usize, objective: &Objective) -> Result<SearchResult> {
    if max_len > MAX_WORD_LEN {
        return Err(Error::domain(format!(
            "search length {max_len} exceeds the limit {MAX_WORD_LEN}"
        )));
    }
    let seed = ExponentPair::trivial();
    let mut best = SearchResult {
        word: ProcessWord::empty(),
        score: objective.score(&seed),
        pair: seed.clone(),
        evaluated: 1,
    };
    // Level L holds the words of length L in lexicographic order, each with its pair.
    // Prefixing a symbol to every word of level L-1 keeps that order.
    let mut level: Vec<(Vec<Process>, (Rational, Rational))> =
        vec![(Vec::new(), (seed.p.clone(), seed.q.clone()))];
    for _ in 1..=max_len {
        level = [Process::A, Process::B]
            .iter()
            .flat_map(|&sym| level.iter().map(move |entry| (sym, entry)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(sym, (word, (p, q)))| {
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(sym);
                w.extend_from_slice(word);
                let pair = ExponentPair {
                    p: p.clone(),
                    q: q.clone(),
                    provenance: Provenance::Seed,
                };
                let next = match sym {
                    Process::A => process_a(&pair),
                    Process::B => process_b(&pair),
                };
                (w, (next.p, next.q))
            })
            .collect();
        best.evaluated += level.len();
        let scores: Vec<Rational> = level
            .par_iter()
            .map(|(_, (p, q))| &objective.alpha * p + &objective.beta * q)
            .collect();
        for (i, score) in scores.into_iter().enumerate() {
            if score < best.score {
                let word = ProcessWord {
                    symbols: level[i].0.clone(),
                };
                best.pair = eval_word(&word, &seed);
                best.word = word;
                best.score = score;
            }
        }
    }
    Ok(best)
}
