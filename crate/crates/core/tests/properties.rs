//! Property suites over the pipeline pieces: cleaning idempotence, padding,
//! vocabulary determinism, histogram conservation, n-gram recounts against a
//! brute-force oracle, split partitioning, and the exhaustive label
//! truth-table check.

use std::collections::{BTreeMap, HashSet};

use newstrust::analysis::{count_ngrams, polarity_histogram, PolarityLexicon};
use newstrust::corpus::{split, Fraction, LabelSource, OutletLabels, Partition};
use newstrust::labeling::{binarize, compute_rating, TrustClass, RATING_SOURCES};
use newstrust::textprep::{clean, pad, to_sequence, StopwordList, TokenizedDoc, Vocabulary};
use proptest::prelude::*;

proptest! {
    #[test]
    fn clean_is_idempotent(text in ".{0,300}") {
        let stop = StopwordList::bundled();
        let once = clean(&text, &stop);
        let twice = clean(&once.join(" "), &stop);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn clean_output_is_lowercase_alpha_non_stopword(text in ".{0,300}") {
        let stop = StopwordList::bundled();
        for token in clean(&text, &stop) {
            prop_assert!(!token.is_empty());
            prop_assert!(token.bytes().all(|b| b.is_ascii_lowercase()));
            prop_assert!(!stop.contains(&token));
        }
    }

    #[test]
    fn pad_length_and_tail(indices in prop::collection::vec(0usize..500, 0..40), len in 1usize..20) {
        let padded = pad(&indices, len);
        prop_assert_eq!(padded.indices.len(), len);
        let keep = indices.len().min(len);
        // The nonzero suffix equals the (possibly truncated) input tail.
        prop_assert_eq!(
            &padded.indices[len - keep..],
            &indices[indices.len() - keep..]
        );
        if indices.len() < len {
            prop_assert!(padded.indices[..len - indices.len()].iter().all(|&i| i == 0));
        }
    }

    #[test]
    fn vocabulary_build_is_deterministic(
        docs in prop::collection::vec(
            prop::collection::vec("[a-e]{1,3}", 0..12),
            0..8,
        )
    ) {
        let corpus: Vec<TokenizedDoc> = docs
            .iter()
            .enumerate()
            .map(|(i, tokens)| TokenizedDoc::new(format!("d{i}"), tokens.clone()))
            .collect();
        let a = Vocabulary::build(&corpus);
        let b = Vocabulary::build(&corpus);
        prop_assert_eq!(&a, &b);
        // Indices are exactly 1..V-1.
        let mut seen: Vec<usize> = corpus
            .iter()
            .flat_map(|d| d.tokens.iter())
            .filter_map(|t| a.index_of(t))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len() + 1, a.size());
    }

    #[test]
    fn sequence_roundtrip_recovers_in_vocab_tokens(
        tokens in prop::collection::vec("[a-d]{1,2}", 0..20),
        vocab_tokens in prop::collection::vec("[a-d]{1,2}", 1..10),
    ) {
        let vocab = Vocabulary::build(&[TokenizedDoc::new("v", vocab_tokens)]);
        let tokens: Vec<String> = tokens;
        let seq = to_sequence(&tokens, &vocab);
        let recovered: Vec<&str> = seq.iter().map(|&i| vocab.word_at(i).unwrap()).collect();
        let expected: Vec<&str> = tokens
            .iter()
            .filter(|t| vocab.index_of(t).is_some())
            .map(|s| s.as_str())
            .collect();
        prop_assert_eq!(recovered, expected);
    }

    #[test]
    fn histogram_conserves_document_count(
        docs in prop::collection::vec(prop::collection::vec("[a-z]{1,6}", 0..10), 0..20),
        bins in 1usize..12,
    ) {
        let corpus: Vec<TokenizedDoc> = docs
            .iter()
            .enumerate()
            .map(|(i, tokens)| TokenizedDoc::new(format!("d{i}"), tokens.clone()))
            .collect();
        let hist = polarity_histogram(&corpus, bins, &PolarityLexicon::bundled());
        prop_assert_eq!(hist.counts.iter().sum::<u64>(), corpus.len() as u64);
    }

    #[test]
    fn ngram_counts_match_brute_force(
        docs in prop::collection::vec(prop::collection::vec("[a-c]", 0..25), 1..12),
        n in 1usize..4,
    ) {
        let corpus: Vec<TokenizedDoc> = docs
            .iter()
            .enumerate()
            .map(|(i, tokens)| TokenizedDoc::new(format!("d{i}"), tokens.clone()))
            .collect();
        let counts = count_ngrams(&corpus, n);

        // Brute force: for every distinct candidate, rescan every position.
        let mut oracle: BTreeMap<Vec<String>, u64> = BTreeMap::new();
        for doc in &corpus {
            if doc.tokens.len() < n {
                continue;
            }
            for start in 0..=(doc.tokens.len() - n) {
                let gram: Vec<String> = doc.tokens[start..start + n].to_vec();
                *oracle.entry(gram).or_insert(0) += 1;
            }
        }
        prop_assert_eq!(counts.len(), oracle.len());
        for (gram, count) in oracle {
            prop_assert_eq!(counts.get(&gram), Some(&count));
        }
    }

    #[test]
    fn split_is_a_partition_with_exact_sizes(n in 1usize..400, seed in any::<u64>()) {
        let ids: Vec<String> = (0..n).map(|i| format!("id{i}")).collect();
        let assignment = split(ids.iter().map(|s| s.as_str()), Fraction::TWO_THIRDS, seed).unwrap();
        prop_assert_eq!(assignment.assignment.len(), n);
        let train: HashSet<&String> = assignment
            .assignment
            .iter()
            .filter(|(_, p)| **p == Partition::Train)
            .map(|(id, _)| id)
            .collect();
        let test: HashSet<&String> = assignment
            .assignment
            .iter()
            .filter(|(_, p)| **p == Partition::Test)
            .map(|(id, _)| id)
            .collect();
        prop_assert!(train.is_disjoint(&test));
        prop_assert_eq!(train.len() + test.len(), n);
        let expect = Fraction::TWO_THIRDS.scale_round(n as u64) as i64;
        prop_assert!((train.len() as i64 - expect).abs() <= 1);
    }
}

/// Exhaustive truth-table oracle over all 3^5 rating-source configurations.
#[test]
fn label_logic_matches_brute_force_over_243_configs() {
    for mask in 0..243u32 {
        let mut labels = OutletLabels::new("o");
        let mut positives = 0i32;
        let mut negatives = 0i32;
        let mut m = mask;
        for source in RATING_SOURCES {
            match m % 3 {
                0 => {}
                1 => {
                    labels.set(source, false);
                    negatives += 1;
                }
                _ => {
                    labels.set(source, true);
                    positives += 1;
                }
            }
            m /= 3;
        }
        let rating = compute_rating(&labels);
        assert_eq!(rating.0 as i32, positives - negatives, "config {mask}");
        let class = binarize(rating);
        let expected = match positives.cmp(&negatives) {
            std::cmp::Ordering::Greater => Some(TrustClass::Trustworthy),
            std::cmp::Ordering::Less => Some(TrustClass::Untrustworthy),
            std::cmp::Ordering::Equal => None,
        };
        assert_eq!(class, expected, "config {mask}");
    }
}

/// Non-rating sources never shift the rating, exhaustively.
#[test]
fn non_rating_sources_never_matter() {
    let extras = [
        LabelSource::OpenSources,
        LabelSource::AllSides,
        LabelSource::BuzzFeedNews,
    ];
    for mask in 0..27u32 {
        let mut labels = OutletLabels::new("o");
        labels.set(LabelSource::NewsGuard, true);
        let mut m = mask;
        for source in extras {
            match m % 3 {
                0 => {}
                1 => labels.set(source, false),
                _ => labels.set(source, true),
            }
            m /= 3;
        }
        assert_eq!(compute_rating(&labels).0, 1);
    }
}
