//! Tweet record parsing and graph ingestion.
//!
//! Input is a JSON-lines file, one record per line. Ingestion produces one
//! `tweet` node per record, deduplicated `user`/`hashtag`/`url` nodes, and
//! the four schema edges: `authors` (user→tweet), `mentions` (tweet→user),
//! `uses` (tweet→hashtag), `contains` (tweet→url).

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, PropValue, PropertyGraph};

pub const TWEET: &str = "tweet";
pub const USER: &str = "user";
pub const HASHTAG: &str = "hashtag";
pub const URL: &str = "url";

pub const AUTHORS: &str = "authors";
pub const MENTIONS: &str = "mentions";
pub const USES: &str = "uses";
pub const CONTAINS: &str = "contains";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TweetRecord {
    pub id: String,
    pub author: String,
    pub text: String,
    pub created_at: String,
    #[serde(default)]
    pub hashtags: Vec<String>,
    #[serde(default)]
    pub mentions: Vec<String>,
    #[serde(default)]
    pub urls: Vec<String>,
    #[serde(default)]
    pub popularity: u64,
    #[serde(default)]
    pub author_followers: u64,
}

impl TweetRecord {
    /// The calendar-date part of `created_at` (everything before `T`).
    pub fn date(&self) -> &str {
        self.created_at.split('T').next().unwrap_or("")
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.id.is_empty() {
            return Err("empty tweet id".into());
        }
        if self.author.is_empty() {
            return Err("empty author".into());
        }
        let date = self.date();
        let bytes = date.as_bytes();
        let iso_date = bytes.len() == 10
            && bytes.iter().enumerate().all(|(i, b)| match i {
                4 | 7 => *b == b'-',
                _ => b.is_ascii_digit(),
            });
        if !iso_date {
            return Err(format!("created_at {:?} is not ISO-8601", self.created_at));
        }
        Ok(())
    }
}

/// Lowercase a hashtag and strip one leading `#`.
pub fn normalize_hashtag(tag: &str) -> String {
    tag.strip_prefix('#').unwrap_or(tag).to_lowercase()
}

/// Read tweet records from a JSON-lines reader; blank lines are skipped and
/// errors name the offending 1-based line.
pub fn read_tweets<R: Read>(reader: R) -> Result<Vec<TweetRecord>> {
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: TweetRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                line: idx + 1,
                reason: e.to_string(),
            })?;
        record.validate().map_err(|reason| Error::MalformedRecord {
            line: idx + 1,
            reason,
        })?;
        records.push(record);
    }
    Ok(records)
}

pub fn read_tweets_file(path: &Path) -> Result<Vec<TweetRecord>> {
    read_tweets(File::open(path)?)
}

/// Build the property graph for a batch of records.
pub fn ingest_tweets(records: &[TweetRecord]) -> Result<PropertyGraph> {
    let mut g = PropertyGraph::new();
    let mut seen = BTreeSet::new();
    for record in records {
        if !seen.insert(record.id.clone()) {
            return Err(Error::DuplicateTweetId(record.id.clone()));
        }
        let tweet = NodeId::scoped(TWEET, &record.id);
        g.add_node(tweet.clone(), TWEET);
        g.set_node_prop(&tweet, "text", record.text.clone().into())?;
        g.set_node_prop(&tweet, "date", record.date().into())?;
        g.set_node_prop(&tweet, "popularity", PropValue::Int(record.popularity as i64))?;

        let author = NodeId::scoped(USER, &record.author);
        g.add_node(author.clone(), USER);
        g.set_node_prop(
            &author,
            "followers",
            PropValue::Int(record.author_followers as i64),
        )?;
        g.add_edge(author.clone(), tweet.clone(), AUTHORS)?;

        for mention in &record.mentions {
            let user = NodeId::scoped(USER, mention);
            g.add_node(user.clone(), USER);
            g.add_edge(tweet.clone(), user, MENTIONS)?;
        }
        for tag in &record.hashtags {
            let text = normalize_hashtag(tag);
            let node = NodeId::scoped(HASHTAG, &text);
            g.add_node(node.clone(), HASHTAG);
            g.set_node_prop(&node, "text", text.into())?;
            g.add_edge(tweet.clone(), node, USES)?;
        }
        for url in &record.urls {
            let node = NodeId::scoped(URL, url);
            g.add_node(node.clone(), URL);
            g.add_edge(tweet.clone(), node, CONTAINS)?;
        }
    }
    Ok(g)
}
