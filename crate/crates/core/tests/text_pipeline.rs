use std::collections::BTreeMap;

use narca_core::text::{
    build_vocabulary, threshold_matrix, tokenize, Corpus, Document, RowRole, TokenizerConfig,
};
use proptest::prelude::*;

const INITIATING: [(u32, &str); 9] = [
    (1, "Introducing #climatechange! Is the climate changing?What are the observed changes?Are humans causing it? Discuss http://t.co/cMUOmbEt #dmuCC"),
    (2, "Do you feel #climatechange is a distant issue? Read and listen to the climate witnesses in the UK http://t.co/FLWaTqTb"),
    (3, "Goodmorning #DMU!! How was your weekend? Did you participate in the #marathon? We are talking about electricity this week! #dmuelectricity"),
    (4, "Goodmorning #DMU!! How was your weekend? We are talking about gas and heating this week! #dmuenergy Wishing you all a nice #ecomonday!"),
    (4, "Connect with us to discover what #DMU is already doing to cut its #gas use and tell us what you think we could all do to make it better!"),
    (5, "Goodmorning #DMU!! We talk about #sustainable food this week. We have a question for you! What do you think does Sustainable Food mean?"),
    (6, "Here I am, fueled with caffeine! This week we will be talking in particular of #transport. How do you get from home to #DMU? #dmutransport"),
    (7, "New post! #Sustainable #Water | Are you familiar with the concept of #WaterSecurity?  http://t.co/T9QYVlTJ #DMU #climate #sustainabledmu"),
    (8, "@SustainableDMU #MeatFreeMonday seems to have latched itself into my brain! Not a big meat eater but like having a dedicated veggie day!"),
];

/// Terms the reference vocabulary kept for each initiating text, with counts.
const RETAINED: [(u32, &[(&str, usize)]); 8] = [
    (1, &[("climate", 1), ("climatechange", 1), ("dmucc", 1), ("http", 1)]),
    (2, &[("climate", 1), ("climatechange", 1), ("http", 1), ("read", 1)]),
    (3, &[("dmu", 1), ("electricity", 1), ("goodmorning", 1), ("participate", 1), ("talking", 1), ("week", 1), ("weekend", 1)]),
    (4, &[("cut", 1), ("dmu", 2), ("dmuenergy", 1), ("ecomonday", 1), ("gas", 2), ("goodmorning", 1), ("heating", 1), ("nice", 1), ("talking", 1), ("tell", 1), ("week", 1), ("weekend", 1)]),
    (5, &[("dmu", 1), ("food", 2), ("goodmorning", 1), ("mean", 1), ("question", 1), ("sustainable", 2), ("talk", 1), ("week", 1)]),
    (6, &[("dmu", 1), ("dmutransport", 1), ("home", 1), ("talking", 1), ("transport", 1), ("week", 1)]),
    (7, &[("climate", 1), ("dmu", 1), ("http", 1), ("post", 1), ("sustainable", 1), ("sustainabledmu", 1), ("water", 1)]),
    (8, &[("day", 1), ("meat", 1), ("meatfreemonday", 1), ("sustainabledmu", 1), ("veggie", 1)]),
];

fn initiating_corpus() -> Corpus {
    let docs = INITIATING
        .iter()
        .enumerate()
        .map(|(i, (c, t))| Document::new(300 + i as u32, *t).with_campaign(*c).initiating())
        .collect();
    Corpus::new(docs).unwrap()
}

fn counts(tokens: &[String]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for t in tokens {
        *m.entry(t.clone()).or_insert(0) += 1;
    }
    m
}

#[test]
fn initiating_texts_keep_reference_terms() {
    let mut corpus = initiating_corpus();
    let runs = corpus.merge_adjacent_initiating().unwrap();
    assert_eq!(runs, vec![vec![303, 304]]);
    assert_eq!(corpus.len(), 8);
    let cfg = TokenizerConfig::default();
    let sums = [4, 4, 7, 14, 10, 6, 7, 5];
    for (doc, (campaign, retained)) in corpus.docs().iter().zip(RETAINED) {
        assert_eq!(doc.campaign, Some(campaign));
        let c = counts(&tokenize(&doc.raw_text, &cfg));
        for (term, n) in retained {
            assert_eq!(c.get(*term), Some(n), "campaign {campaign}, term {term}");
        }
        let total: usize = retained.iter().map(|(_, n)| n).sum();
        assert_eq!(total, sums[campaign as usize - 1]);
    }
}

#[test]
fn url_and_apostrophe_handling() {
    let cfg = TokenizerConfig::default();
    assert_eq!(tokenize("http://t.co/cMUOmbEt", &cfg), ["http", "co", "cmuombet"]);
    assert_eq!(tokenize("I've been, I don't", &cfg), ["been"]);
    assert_eq!(tokenize("fish &amp; chips", &cfg), ["fish", "chips"]);
    assert_eq!(tokenize("we'll isn't", &cfg), ["we", "isn"]);
}

fn corpus_strategy() -> impl Strategy<Value = Vec<String>> {
    let word = prop::sample::select(vec![
        "alpha", "beta", "gamma", "delta", "the", "and", "x", "it's", "Zeta!", "&amp;", "#tag", "42",
    ]);
    prop::collection::vec(prop::collection::vec(word, 0..12).prop_map(|w| w.join(" ")), 1..25)
}

proptest! {
    #[test]
    fn tokenize_is_idempotent(text in "[a-zA-Z0-9 '#&;.!]{0,80}") {
        let cfg = TokenizerConfig::default();
        let once = tokenize(&text, &cfg);
        let twice = tokenize(&once.join(" "), &cfg);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn thresholding_matches_brute_force(texts in corpus_strategy(), min_freq in 1u32..6, min_docs in 1u32..6) {
        let cfg = TokenizerConfig::default();
        let docs: Vec<Document> = texts.iter().enumerate().map(|(i, t)| Document::new(i as u32, t.clone())).collect();
        let vocab = build_vocabulary(&docs, &cfg);
        let tokens: Vec<Vec<String>> = texts.iter().map(|t| tokenize(t, &cfg)).collect();
        let mut freq: BTreeMap<String, (u32, u32)> = BTreeMap::new();
        for doc in &tokens {
            for (t, n) in counts(doc) {
                let e = freq.entry(t).or_default();
                e.0 += n as u32;
                e.1 += 1;
            }
        }
        let kept: Vec<&str> = freq.iter().filter(|(_, (f, d))| *f >= min_freq && *d >= min_docs).map(|(t, _)| t.as_str()).collect();
        let expected_rows: Vec<usize> = (0..docs.len()).filter(|&i| tokens[i].iter().any(|t| kept.contains(&t.as_str()))).collect();
        match threshold_matrix(&docs, &vocab, &cfg, min_freq, min_docs) {
            Ok(m) => {
                let labels: Vec<&str> = m.columns.iter().map(|c| c.label.as_str()).collect();
                prop_assert_eq!(&labels, &kept);
                let seqs: Vec<u32> = m.rows.iter().map(|r| r.seq_no).collect();
                prop_assert_eq!(seqs, expected_rows.iter().map(|&i| i as u32).collect::<Vec<_>>());
                for (r, &i) in expected_rows.iter().enumerate() {
                    let c = counts(&tokens[i]);
                    for (j, t) in kept.iter().enumerate() {
                        prop_assert_eq!(m.get(r, j) as usize, c.get(*t).copied().unwrap_or(0));
                    }
                    let principal: u32 = m.term_columns().iter().map(|&j| m.get(r, j)).sum();
                    prop_assert!(principal > 0);
                }
            }
            Err(_) => prop_assert!(expected_rows.is_empty()),
        }
    }

    #[test]
    fn term_order_is_independent_of_document_order(texts in corpus_strategy()) {
        let cfg = TokenizerConfig::default();
        let docs: Vec<Document> = texts.iter().enumerate().map(|(i, t)| Document::new(i as u32, t.clone())).collect();
        let mut rev_texts = texts.clone();
        rev_texts.reverse();
        let rev: Vec<Document> = rev_texts.iter().enumerate().map(|(i, t)| Document::new(i as u32, t.clone())).collect();
        let a = build_vocabulary(&docs, &cfg);
        let b = build_vocabulary(&rev, &cfg);
        prop_assert_eq!(a, b);
    }
}

#[test]
fn initiating_rows_are_supplementary() {
    let mut docs: Vec<Document> = (0..6).map(|i| Document::new(i, "alpha beta gamma").with_campaign(1)).collect();
    docs.insert(0, Document::new(100, "alpha gamma").with_campaign(1).initiating());
    for (i, d) in docs.iter_mut().enumerate() {
        d.seq_no = i as u32;
    }
    let cfg = TokenizerConfig::default();
    let vocab = build_vocabulary(&docs, &cfg);
    let m = threshold_matrix(&docs, &vocab, &cfg, 5, 5).unwrap();
    assert_eq!(m.rows_with_role(RowRole::Supplementary), vec![0]);
    assert_eq!(m.rows_with_role(RowRole::Principal).len(), 6);
    let ind = m.indicator_column(1).unwrap();
    assert_eq!(m.get(0, ind), 1);
}
