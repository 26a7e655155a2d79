//! Exhaustive uniqueness checks for positive words of the shape `x_n v` and
//! `x_n v x_1 v'` against all competitors `x_m w` of the same length, with
//! `v, v', w` words over `{x_0, x_1}`.
//!
//! Competitor index bound. The caret laid down by a leading `x_m` spans the
//! adjacent leaves `m` and `m+1` forever (later carets only join roots), so
//! a forest storing `s` leaves admits no leading factor `x_m` with
//! `m + 2 > s`. Stored leaves decompose as stored trees plus carets, the
//! stored width never grows past its starting value `n + 1`, and the word
//! `x_n rest` has `1 + |rest|` carets, hence `s <= n + 2 + |rest|` and every
//! competitor satisfies `m <= n + |rest|`. The scan additionally computes
//! `s - 2` from the target forest directly and takes the larger range, so
//! the enumeration never depends on the derivation alone.

use crate::error::WordError;
use crate::exec;
use crate::forest::{word_to_forest, BinaryForest};
use crate::word::{positive_words_of_length, Letter, Word};

fn check_letters01(w: &Word) -> Result<(), WordError> {
    for l in &w.letters {
        if l.inverse {
            return Err(WordError::NegativeLetter(l.index));
        }
        if l.index > 1 {
            return Err(WordError::BadLemmaParameters(format!(
                "letter x{} is outside the alphabet {{x0, x1}}",
                l.index
            )));
        }
    }
    Ok(())
}

/// Builds the word `x_n rest` and checks that no other `x_m w` of the same
/// length, `w` over `{x_0, x_1}`, has the same forest.
fn unique_among_xm_w(n: u32, rest: &Word) -> bool {
    let target_word = Word::from_letters(
        std::iter::once(Letter::gen(n))
            .chain(rest.letters.iter().copied())
            .collect(),
    );
    let target = word_to_forest(&target_word).expect("positive word");
    let wlen = rest.len();
    // See the module header; the two bounds agree up to the one-index slack.
    let m_bound = (n as usize + wlen + 1).max(target.stored_leaves().saturating_sub(2));
    let competitors = positive_words_of_length(&[0, 1], wlen);
    let candidates: Vec<(u32, Word)> = (0..=m_bound as u32)
        .flat_map(|m| competitors.iter().map(move |w| (m, w.clone())))
        .collect();
    exec::all(&candidates, |(m, w)| {
        if *m == n && w == rest {
            return true;
        }
        let mut f = BinaryForest::generator(*m);
        for l in &w.letters {
            f = f.add_caret(l.index as usize);
        }
        f != target
    })
}

/// Uniqueness of `x_n v` for `n >= 2` and `v` over `{x_0, x_1}` with
/// `|v| <= n - 2`: true iff no other word `x_m w` of the same length is equal
/// to it in F (forests are canonical for the positive monoid).
pub fn lemma1_check(n: u32, v: &Word) -> Result<bool, WordError> {
    if n < 2 {
        return Err(WordError::BadLemmaParameters(format!("n = {n} < 2")));
    }
    check_letters01(v)?;
    if v.len() + 2 > n as usize {
        return Err(WordError::BadLemmaParameters(format!(
            "|v| = {} exceeds n - 2 = {}",
            v.len(),
            n - 2
        )));
    }
    Ok(unique_among_xm_w(n, v))
}

/// Uniqueness of `x_n v x_1 v'` for `n >= 2`, `|v| = n - 2`, and `v'` over
/// `{x_0, x_1}`.
pub fn lemma2_check(n: u32, v: &Word, v_prime: &Word) -> Result<bool, WordError> {
    if n < 2 {
        return Err(WordError::BadLemmaParameters(format!("n = {n} < 2")));
    }
    check_letters01(v)?;
    check_letters01(v_prime)?;
    if v.len() + 2 != n as usize {
        return Err(WordError::BadLemmaParameters(format!(
            "|v| = {} but must equal n - 2 = {}",
            v.len(),
            n - 2
        )));
    }
    let rest = v.concat(&Word::positive(&[1])).concat(v_prime);
    Ok(unique_among_xm_w(n, &rest))
}
