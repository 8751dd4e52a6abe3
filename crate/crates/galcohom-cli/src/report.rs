//! Report assembly: one schema for text and JSON presentation. JSON output
//! is deterministic (fixed key order, no timing); the timing line is shown
//! in text mode only.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub blocks: Vec<Block>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

#[derive(Serialize)]
pub struct Block {
    pub title: String,
    pub lines: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            schema: 1,
            command: command.to_string(),
            input: None,
            input_digest: None,
            blocks: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn block(&mut self, title: &str) -> &mut Block {
        self.blocks.push(Block { title: title.to_string(), lines: Vec::new(), data: BTreeMap::new() });
        self.blocks.last_mut().unwrap()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if let Some(i) = &self.input {
            out.push_str(&format!("input: {}\n", i));
        }
        if let Some(d) = &self.input_digest {
            out.push_str(&format!("digest: {}\n", d));
        }
        for b in &self.blocks {
            out.push_str(&format!("\n[{}]\n", b.title));
            for l in &b.lines {
                out.push_str(&format!("  {}\n", l));
            }
        }
        out.push_str(&format!("\nelapsed: {} ms\n", self.elapsed_ms));
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

impl Block {
    pub fn line(&mut self, s: impl Into<String>) -> &mut Block {
        self.lines.push(s.into());
        self
    }

    pub fn datum(&mut self, key: &str, v: serde_json::Value) -> &mut Block {
        self.data.insert(key.to_string(), v);
        self
    }
}
