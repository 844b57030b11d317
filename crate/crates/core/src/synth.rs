//! Seeded synthetic tweet datasets: a preferential-attachment mention
//! background plus optional planted structures used by the end-to-end tests
//! (a dense low-vocabulary core, a hub-bridging group, and a broad star).

use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ingest::TweetRecord;

const DATE: &str = "2026-02-01";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackgroundSpec {
    /// Number of background tweets.
    pub tweets: usize,
    /// Mentions per tweet, drawn preferentially by prior mention count.
    pub attachment: usize,
    /// User population; 0 derives `tweets / 5`.
    #[serde(default)]
    pub users: usize,
    /// On-topic hashtag pool size; 0 derives `max(12, tweets / 33)`.
    #[serde(default)]
    pub hashtag_pool: usize,
    /// Background text vocabulary; 0 derives `tweets + 1000`.
    #[serde(default)]
    pub vocabulary: usize,
    /// Fraction of tweets tagged off-topic (excluded by the usual query).
    #[serde(default = "default_offtopic")]
    pub offtopic_fraction: f64,
}

fn default_offtopic() -> f64 {
    0.1
}

impl BackgroundSpec {
    fn users(&self) -> usize {
        if self.users > 0 {
            self.users
        } else {
            (self.tweets / 5).max(10)
        }
    }

    fn hashtag_pool(&self) -> usize {
        if self.hashtag_pool > 0 {
            self.hashtag_pool
        } else {
            (self.tweets / 33).max(12)
        }
    }

    fn vocabulary(&self) -> usize {
        if self.vocabulary > 0 {
            self.vocabulary
        } else {
            self.tweets + 1000
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Archetype {
    /// Clique-like mutual-mention group over a tiny vocabulary.
    DenseCoreLowDiversity,
    /// Tweets co-mentioning hub users of two separate regions.
    Bridge,
    /// Tweets each mentioning many unrelated popular users.
    BroadStar,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub archetype: Archetype,
    /// Tweets in the planted group.
    pub size: usize,
    /// Mention probability between core pool members.
    #[serde(default = "default_edge_prob")]
    pub edge_prob: f64,
    /// Vocabulary size for the group's texts.
    pub vocabulary: usize,
}

fn default_edge_prob() -> f64 {
    0.8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthSpec {
    pub background: BackgroundSpec,
    #[serde(default)]
    pub planted: Vec<PlantedSpec>,
    pub seed: u64,
}

fn word(vocab_tag: &str, idx: usize) -> String {
    format!("{vocab_tag}{idx}")
}

fn text_from<R: Rng>(rng: &mut R, vocab_tag: &str, vocabulary: usize, len: usize) -> String {
    (0..len)
        .map(|_| word(vocab_tag, rng.gen_range(0..vocabulary)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn popularity<R: Rng>(rng: &mut R) -> u64 {
    let u: f64 = rng.gen();
    (u.powi(3) * 200.0) as u64
}

/// Generate the dataset for a spec. Output is deterministic in the seed.
pub fn synth_records(spec: &SynthSpec) -> Vec<TweetRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bg = &spec.background;
    let users = bg.users();
    let vocab = bg.vocabulary();
    let tags = bg.hashtag_pool();
    let off_tags = (tags / 5).max(4);

    let user_name = |i: usize| format!("u{i:05}");
    let mut records = Vec::with_capacity(bg.tweets);
    // preferential pool: one entry per user, plus one per received mention
    let mut pool: Vec<usize> = (0..users).collect();
    let mut mention_counts = vec![0usize; users];

    for i in 0..bg.tweets {
        let author = rng.gen_range(0..users);
        let mut mentions = Vec::new();
        let mut guard = 0;
        while mentions.len() < bg.attachment && guard < 50 {
            guard += 1;
            let pick = pool[rng.gen_range(0..pool.len())];
            if pick != author && !mentions.contains(&pick) {
                mentions.push(pick);
            }
        }
        for &m in &mentions {
            pool.push(m);
            mention_counts[m] += 1;
        }
        let len = rng.gen_range(8..=14);
        let text = text_from(&mut rng, "w", vocab, len);
        let offtopic = rng.gen::<f64>() < bg.offtopic_fraction;
        let n_tags = rng.gen_range(1..=2usize);
        let hashtags = (0..n_tags)
            .map(|_| {
                if offtopic {
                    format!("off{:03}", rng.gen_range(0..off_tags))
                } else {
                    format!("tag{:03}", rng.gen_range(0..tags))
                }
            })
            .collect();
        records.push(TweetRecord {
            id: format!("bg{i:06}"),
            author: user_name(author),
            text,
            created_at: DATE.into(),
            hashtags,
            mentions: mentions.iter().map(|&m| user_name(m)).collect(),
            urls: vec![],
            popularity: popularity(&mut rng),
            author_followers: mention_counts[author] as u64,
        });
    }

    // hubs: most-mentioned background users
    let mut by_count: Vec<usize> = (0..users).collect();
    by_count.sort_by_key(|&u| std::cmp::Reverse(mention_counts[u]));
    let hubs: Vec<String> = by_count.iter().take(60).map(|&u| user_name(u)).collect();

    for (gi, planted) in spec.planted.iter().enumerate() {
        match planted.archetype {
            Archetype::DenseCoreLowDiversity => {
                plant_dense_core(&mut rng, &mut records, gi, planted);
            }
            Archetype::Bridge => plant_bridge(&mut rng, &mut records, gi, planted, &hubs, vocab),
            Archetype::BroadStar => {
                plant_broad_star(&mut rng, &mut records, gi, planted, &hubs, vocab)
            }
        }
    }
    records
}

fn plant_dense_core<R: Rng>(
    rng: &mut R,
    records: &mut Vec<TweetRecord>,
    gi: usize,
    planted: &PlantedSpec,
) {
    let pool_size = (planted.size / 3).max(5);
    let member = |j: usize| format!("coreu{gi:02}x{j:03}");
    let vocab_tag = format!("corew{gi:02}x");
    for t in 0..planted.size {
        let author = t % pool_size;
        let mut mentions: Vec<String> = (0..pool_size)
            .filter(|&j| j != author && rng.gen::<f64>() < planted.edge_prob)
            .map(member)
            .collect();
        if mentions.is_empty() {
            mentions.push(member((author + 1) % pool_size));
        }
        let len = rng.gen_range(8..=14);
        records.push(TweetRecord {
            id: format!("core{gi:02}t{t:04}"),
            author: member(author),
            text: text_from(rng, &vocab_tag, planted.vocabulary.max(1), len),
            created_at: DATE.into(),
            hashtags: vec![format!("core{gi:02}")],
            mentions,
            urls: vec![],
            popularity: popularity(rng),
            author_followers: 0,
        });
    }
}

fn plant_bridge<R: Rng>(
    rng: &mut R,
    records: &mut Vec<TweetRecord>,
    gi: usize,
    planted: &PlantedSpec,
    hubs: &[String],
    background_vocab: usize,
) {
    // two disjoint hub regions to be bridged
    let region_a: Vec<&String> = hubs.iter().step_by(2).take(8).collect();
    let region_b: Vec<&String> = hubs.iter().skip(1).step_by(2).take(8).collect();
    let pool_size = (planted.size / 3).max(4);
    let author = |j: usize| format!("bridgeu{gi:02}x{j:03}");
    let vocab = if planted.vocabulary > 0 {
        planted.vocabulary
    } else {
        background_vocab
    };
    for t in 0..planted.size {
        let mut mentions: Vec<String> = Vec::new();
        for region in [&region_a, &region_b] {
            let picks = 2.min(region.len());
            let chosen: Vec<&&String> = region.choose_multiple(rng, picks).collect();
            mentions.extend(chosen.into_iter().map(|s| (*s).clone()));
        }
        let len = rng.gen_range(8..=14);
        records.push(TweetRecord {
            id: format!("bridge{gi:02}t{t:04}"),
            author: author(t % pool_size),
            text: text_from(rng, "w", vocab, len),
            created_at: DATE.into(),
            hashtags: vec![format!("bridge{gi:02}")],
            mentions,
            urls: vec![],
            popularity: popularity(rng),
            author_followers: 0,
        });
    }
}

fn plant_broad_star<R: Rng>(
    rng: &mut R,
    records: &mut Vec<TweetRecord>,
    gi: usize,
    planted: &PlantedSpec,
    hubs: &[String],
    background_vocab: usize,
) {
    for t in 0..planted.size {
        let n_mentions = rng.gen_range(12..=16usize).min(hubs.len());
        let mentions: Vec<String> = hubs
            .choose_multiple(rng, n_mentions)
            .cloned()
            .collect();
        let len = rng.gen_range(8..=14);
        let vocab = if planted.vocabulary > 0 {
            planted.vocabulary
        } else {
            background_vocab
        };
        records.push(TweetRecord {
            id: format!("star{gi:02}t{t:04}"),
            author: format!("staru{gi:02}x{t:04}"),
            text: text_from(rng, "w", vocab, len),
            created_at: DATE.into(),
            hashtags: vec![format!("star{gi:02}")],
            mentions,
            urls: vec![],
            popularity: popularity(rng),
            author_followers: 0,
        });
    }
}

/// Generate and write the dataset as JSON lines.
pub fn synth_generate(spec: &SynthSpec, path: &Path) -> Result<()> {
    let records = synth_records(spec);
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for record in &records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
