//! Construction parameters (w, α, β) and the derived data: the word v, the
//! exact constants ε, τ, λ, and the y-position anchor table used by the
//! recognizer.
//!
//! The paper's regime is the asymptotic `|w| ≪ α ≪ β`; a finite engine can
//! only enforce the explicit inequalities (`|w| < α < β`, `τ ≥ 10ε`,
//! `λ + 2ε < 1`), so every claim the engine makes is relative to the chosen
//! separations.

use crate::freegroup::{Alphabet, Letter, Word, WordError};
use num_rational::Ratio;
use std::fmt;
use thiserror::Error;

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("w is not cyclically reduced and primitive")]
    WNotPrimitive,
    #[error("w starts with {0}")]
    WStartsBad(char),
    #[error("w ends with {0}")]
    WEndsBad(char),
    #[error("w must not contain the letters of v (x, y)")]
    WContainsVLetters,
    #[error("|w| < alpha < beta violated (|w|={w_len}, alpha={alpha}, beta={beta})")]
    SizeChain { w_len: usize, alpha: i64, beta: i64 },
    #[error("τ ≥ 10ε violated (τ={tau}, ε={eps})")]
    TauTooSmall { tau: Rational, eps: Rational },
    #[error("1/2 < λ < 1 violated (λ={0})")]
    LambdaRange(Rational),
    #[error("λ + 2ε < 1 violated (λ={lambda}, ε={eps})")]
    LambdaEps { lambda: Rational, eps: Rational },
    #[error("w_exponent_bound must be ≥ 1")]
    BadBound,
    #[error("malformed config line {0:?}")]
    BadConfigLine(String),
    #[error("bad rational {0:?} (expected p/q)")]
    BadRational(String),
    #[error("bad integer {0:?}")]
    BadInteger(String),
    #[error("missing config key {0}")]
    MissingKey(&'static str),
}

/// Unvalidated parameter bundle, as read from a config file.
#[derive(Debug, Clone)]
pub struct RawParams {
    pub alphabet: Alphabet,
    pub w: Word,
    pub alpha: i64,
    pub beta: i64,
    pub tau: Rational,
    pub lambda: Rational,
    pub w_exponent_bound: i64,
}

impl RawParams {
    /// Desk-scale defaults: w = zt, α = 5, β = 105, τ = 1/10, λ = 2/3, K = 4.
    pub fn desk_scale() -> Self {
        let alphabet = Alphabet::default_xyzt();
        let w = Word::parse("zt", &alphabet).expect("static word");
        RawParams {
            alphabet,
            w,
            alpha: 5,
            beta: 105,
            tau: Rational::new(1, 10),
            lambda: Rational::new(2, 3),
            w_exponent_bound: 4,
        }
    }

    /// Parses the key=value configuration format.  Unknown keys are an error.
    pub fn from_config(text: &str) -> Result<Self, ParamError> {
        let mut alphabet: Option<String> = None;
        let mut w: Option<String> = None;
        let mut alpha = None;
        let mut beta = None;
        let mut tau = None;
        let mut lambda = None;
        let mut bound = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ParamError::BadConfigLine(line.to_string()))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "alphabet" => alphabet = Some(value.to_string()),
                "w" => w = Some(value.to_string()),
                "alpha" => alpha = Some(parse_int(value)?),
                "beta" => beta = Some(parse_int(value)?),
                "tau" => tau = Some(parse_rational(value)?),
                "lambda" => lambda = Some(parse_rational(value)?),
                "w_exponent_bound" => bound = Some(parse_int(value)?),
                _ => return Err(ParamError::BadConfigLine(line.to_string())),
            }
        }
        let alphabet = match alphabet {
            Some(s) => Alphabet::new(&s)?,
            None => Alphabet::default_xyzt(),
        };
        let w_text = w.ok_or(ParamError::MissingKey("w"))?;
        let w = Word::parse(&w_text, &alphabet)?;
        let defaults = RawParams::desk_scale();
        Ok(RawParams {
            alphabet,
            w,
            alpha: alpha.ok_or(ParamError::MissingKey("alpha"))?,
            beta: beta.ok_or(ParamError::MissingKey("beta"))?,
            tau: tau.unwrap_or(defaults.tau),
            lambda: lambda.unwrap_or(defaults.lambda),
            w_exponent_bound: bound.unwrap_or(defaults.w_exponent_bound),
        })
    }

    /// Checks every side condition and builds the cached v data.
    pub fn validate(self) -> Result<Params, ParamError> {
        if !self.w.is_cyclically_reduced_primitive()? {
            return Err(ParamError::WNotPrimitive);
        }
        let first = self.w.letter(0);
        let last = self.w.letter(self.w.len() - 1);
        let is_v_letter = |l: Letter| l.gen == Alphabet::X || l.gen == Alphabet::Y;
        if is_v_letter(first) {
            return Err(ParamError::WStartsBad(self.alphabet.symbol(first.gen)));
        }
        if is_v_letter(last) {
            return Err(ParamError::WEndsBad(self.alphabet.symbol(last.gen)));
        }
        // The anchor-based recognizer needs the v- and w-patterns to be
        // letter-disjoint; see the module docs.
        if self.w.letters().iter().any(|&l| is_v_letter(l)) {
            return Err(ParamError::WContainsVLetters);
        }
        if !((self.w.len() as i64) < self.alpha && self.alpha < self.beta) {
            return Err(ParamError::SizeChain {
                w_len: self.w.len(),
                alpha: self.alpha,
                beta: self.beta,
            });
        }
        let eps = Rational::new(1, self.beta - self.alpha);
        if self.tau < eps * 10 {
            return Err(ParamError::TauTooSmall { tau: self.tau, eps });
        }
        if !(self.lambda > Rational::new(1, 2) && self.lambda < Rational::new(1, 1)) {
            return Err(ParamError::LambdaRange(self.lambda));
        }
        if self.lambda + eps * 2 >= Rational::new(1, 1) {
            return Err(ParamError::LambdaEps { lambda: self.lambda, eps });
        }
        if self.w_exponent_bound < 1 {
            return Err(ParamError::BadBound);
        }
        let v = VWord::build(self.alpha, self.beta);
        Ok(Params {
            alphabet: self.alphabet,
            w: self.w,
            alpha: self.alpha,
            beta: self.beta,
            tau: self.tau,
            lambda: self.lambda,
            w_exponent_bound: self.w_exponent_bound,
            eps,
            v,
        })
    }
}

fn parse_int(s: &str) -> Result<i64, ParamError> {
    s.parse().map_err(|_| ParamError::BadInteger(s.to_string()))
}

fn parse_rational(s: &str) -> Result<Rational, ParamError> {
    let bad = || ParamError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// The cached value of v = x^α y x^{α+1} y ⋯ x^{β−1} y together with lookup
/// tables for the recognizer.
#[derive(Debug, Clone)]
pub struct VWord {
    word: Word,
    /// Indices into `word` of the β−α letters y, in order.
    y_positions: Vec<usize>,
    /// `y_prefix[i]` = number of y letters among the first `i` letters.
    y_prefix: Vec<usize>,
    /// Offset in v where the x-run of length `alpha + k` starts.
    run_starts: Vec<usize>,
    alpha: i64,
    beta: i64,
}

impl VWord {
    fn build(alpha: i64, beta: i64) -> Self {
        let mut letters = Vec::new();
        let mut y_positions = Vec::new();
        let mut run_starts = Vec::new();
        for run in alpha..beta {
            run_starts.push(letters.len());
            for _ in 0..run {
                letters.push(Letter::new(Alphabet::X, false));
            }
            y_positions.push(letters.len());
            letters.push(Letter::new(Alphabet::Y, false));
        }
        let word = Word::from_letters(letters);
        let mut y_prefix = Vec::with_capacity(word.len() + 1);
        let mut count = 0usize;
        y_prefix.push(0);
        for l in word.letters() {
            if l.gen == Alphabet::Y {
                count += 1;
            }
            y_prefix.push(count);
        }
        VWord { word, y_positions, y_prefix, run_starts, alpha, beta }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn y_positions(&self) -> &[usize] {
        &self.y_positions
    }

    pub fn y_count(&self) -> usize {
        self.y_positions.len()
    }

    /// Number of y letters in v[a..b].
    pub fn ys_in(&self, a: usize, b: usize) -> usize {
        self.y_prefix[b] - self.y_prefix[a]
    }

    /// Start offset in v of the x-run of the given length, if in range.
    pub fn run_start(&self, run_len: i64) -> Option<usize> {
        if run_len < self.alpha || run_len >= self.beta {
            return None;
        }
        Some(self.run_starts[(run_len - self.alpha) as usize])
    }

    /// Length of the x-run that *follows* the y closing the run of length
    /// `run_len` (wrapping from β−1 back to α).
    pub fn next_run(&self, run_len: i64) -> i64 {
        if run_len == self.beta - 1 {
            self.alpha
        } else {
            run_len + 1
        }
    }
}

/// Validated, immutable construction parameters.
#[derive(Debug, Clone)]
pub struct Params {
    pub alphabet: Alphabet,
    pub w: Word,
    pub alpha: i64,
    pub beta: i64,
    pub tau: Rational,
    pub lambda: Rational,
    pub w_exponent_bound: i64,
    eps: Rational,
    v: VWord,
}

impl Params {
    pub fn desk_scale() -> Self {
        RawParams::desk_scale().validate().expect("desk-scale defaults are valid")
    }

    pub fn eps(&self) -> Rational {
        self.eps
    }

    pub fn v(&self) -> &VWord {
        &self.v
    }

    pub fn v_word(&self) -> &Word {
        self.v.word()
    }

    /// β−α, the denominator of every Λ-measure.
    pub fn measure_denom(&self) -> i64 {
        self.beta - self.alpha
    }

    /// The Λ-measure represented by `ys` letters y.
    pub fn measure(&self, ys: usize) -> Rational {
        Rational::new(ys as i64, self.measure_denom())
    }

    /// Renders a measure as "p/q" with q = β−α, uncancelled.
    pub fn format_measure(&self, ys: usize) -> String {
        format!("{}/{}", ys, self.measure_denom())
    }

    /// Smallest y-count whose measure reaches τ.
    pub fn tau_ys(&self) -> usize {
        ceil_ys(self.tau, self.measure_denom())
    }

    /// Smallest y-count whose measure exceeds λ.
    pub fn lambda_forbidden_ys(&self) -> usize {
        let denom = self.measure_denom();
        let mut n = (self.lambda * denom).ceil().to_integer();
        if Rational::new(n, denom) <= self.lambda {
            n += 1;
        }
        n as usize
    }
}

fn ceil_ys(threshold: Rational, denom: i64) -> usize {
    // least n with n/denom >= threshold
    (threshold * denom).ceil().to_integer() as usize
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet = {}", (0..self.alphabet.len()).map(|i| self.alphabet.symbol(i as u8)).collect::<String>())?;
        writeln!(f, "w = {}", self.w.format(&self.alphabet))?;
        writeln!(f, "alpha = {}", self.alpha)?;
        writeln!(f, "beta = {}", self.beta)?;
        writeln!(f, "epsilon = 1/{}", self.measure_denom())?;
        writeln!(f, "tau = {}", self.tau)?;
        writeln!(f, "lambda = {}", self.lambda)?;
        writeln!(f, "w_exponent_bound = {}", self.w_exponent_bound)?;
        write!(f, "|v| = {}", self.v.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_scale_validates_with_expected_constants() {
        let p = Params::desk_scale();
        assert_eq!(p.eps(), Rational::new(1, 100));
        assert_eq!(p.v().len(), 5550);
        assert_eq!(p.v().y_count(), 100);
        assert_eq!(p.tau_ys(), 10);
        assert_eq!(p.lambda_forbidden_ys(), 67);
    }

    #[test]
    fn small_v_expansion_is_exact() {
        let v = VWord::build(2, 4);
        assert_eq!(v.word().to_string(), "xxyxxxy");
        assert_eq!(v.len(), 7);
        assert_eq!(v.y_count(), 2);
        let v = VWord::build(3, 4);
        assert_eq!(v.word().to_string(), "xxxy");
        assert_eq!(v.y_count(), 1);
    }

    #[test]
    fn tau_violation_is_reported() {
        let mut raw = RawParams::desk_scale();
        raw.beta = 10;
        match raw.validate() {
            Err(ParamError::TauTooSmall { eps, .. }) => {
                assert_eq!(eps, Rational::new(1, 5));
            }
            other => panic!("expected TauTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn w_boundary_letters_rejected() {
        let mut raw = RawParams::desk_scale();
        raw.w = Word::parse("xzt", &raw.alphabet).unwrap();
        assert_eq!(raw.validate().unwrap_err(), ParamError::WStartsBad('x'));
        let mut raw = RawParams::desk_scale();
        raw.w = Word::parse("zty", &raw.alphabet).unwrap();
        assert_eq!(raw.validate().unwrap_err(), ParamError::WEndsBad('y'));
    }

    #[test]
    fn config_round_trip() {
        let text = "alphabet=xyzt\nw=zt\nalpha=5\nbeta=105\ntau=1/10\nlambda=2/3\nw_exponent_bound=4\n";
        let p = RawParams::from_config(text).unwrap().validate().unwrap();
        assert_eq!(p.v().len(), 5550);
        assert!(RawParams::from_config("w=zt\nalpha=5\nbeta=105\nnope=1").is_err());
    }

    #[test]
    fn unique_subword_property_at_small_scale() {
        // Any subword of v with at least two y letters occurs at exactly one
        // position; exhaustive scan, small parameters.
        for (alpha, beta) in [(2i64, 5i64), (3, 6)] {
            let v = VWord::build(alpha, beta);
            let w = v.word();
            let n = w.len();
            for start in 0..n {
                for end in (start + 1)..=n {
                    if v.ys_in(start, end) < 2 {
                        continue;
                    }
                    let pattern = w.slice(start, end);
                    let count = (0..=(n - pattern.len()))
                        .filter(|&i| w.slice(i, i + pattern.len()) == pattern)
                        .count();
                    assert_eq!(count, 1, "subword {pattern} occurs {count} times");
                }
            }
        }
    }
}
