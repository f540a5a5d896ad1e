//! Memoization of counts and class triples, keyed by canonical graph keys,
//! with optional JSON-lines persistence.
//!
//! Counts are keyed by the unpinned canonical key. Class triples are keyed
//! with the apex pinned and the base pair pinned as a set; the entry is
//! stored in the canonical base orientation, and lookups whose
//! canonicalization reports a swapped base return the mirrored triple.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::calligraph::MarkedCalligraph;
use crate::canon::{canonical_key, CanonicalKey, Pinning};
use crate::class::S2Class;
use crate::graph::Graph;
use crate::solver::CountCertificate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum CacheValue {
    Count(i64),
    Class([i64; 3]),
}

/// How a cached value was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CountCertificate>,
}

impl Provenance {
    pub fn new(method: &str) -> Self {
        Provenance { method: method.to_string(), certificate: None }
    }

    pub fn with_certificate(method: &str, certificate: CountCertificate) -> Self {
        Provenance { method: method.to_string(), certificate: Some(certificate) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Record {
    key: String,
    #[serde(flatten)]
    value: CacheValue,
    provenance: Provenance,
}

#[derive(Debug, Default)]
pub struct CacheStore {
    map: RwLock<HashMap<Vec<u8>, (CacheValue, Provenance)>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub entries: usize,
    pub counts: usize,
    pub classes: usize,
}

impl CacheStore {
    pub fn new() -> Self {
        Self::default()
    }

    fn count_key(g: &Graph) -> CanonicalKey {
        canonical_key(g, Pinning::None).expect("unpinned keys cannot fail")
    }

    fn class_key(h: &MarkedCalligraph) -> CanonicalKey {
        canonical_key(h.graph(), Pinning::Marked { apex: h.apex(), base: h.base() })
            .expect("marks were validated")
    }

    pub fn get_count(&self, g: &Graph) -> Option<i64> {
        self.get_count_entry(g).map(|(c, _)| c)
    }

    /// Count plus the method recorded in its provenance.
    pub fn get_count_entry(&self, g: &Graph) -> Option<(i64, String)> {
        let key = Self::count_key(g);
        match self.map.read().unwrap().get(key.bytes()) {
            Some((CacheValue::Count(c), prov)) => Some((*c, prov.method.clone())),
            _ => None,
        }
    }

    pub fn put_count(&self, g: &Graph, count: i64, provenance: Provenance) {
        let key = Self::count_key(g);
        self.map
            .write()
            .unwrap()
            .insert(key.bytes().to_vec(), (CacheValue::Count(count), provenance));
    }

    pub fn get_class(&self, h: &MarkedCalligraph) -> Option<S2Class> {
        let key = Self::class_key(h);
        match self.map.read().unwrap().get(key.bytes()) {
            Some((CacheValue::Class(v), _)) => {
                let class = S2Class::from(*v);
                Some(if key.swap_flag() { class.swapped() } else { class })
            }
            _ => None,
        }
    }

    pub fn put_class(&self, h: &MarkedCalligraph, class: S2Class, provenance: Provenance) {
        let key = Self::class_key(h);
        let stored = if key.swap_flag() { class.swapped() } else { class };
        self.map
            .write()
            .unwrap()
            .insert(key.bytes().to_vec(), (CacheValue::Class(stored.as_array()), provenance));
    }

    pub fn stats(&self) -> CacheStats {
        let map = self.map.read().unwrap();
        let counts = map.values().filter(|(v, _)| matches!(v, CacheValue::Count(_))).count();
        CacheStats { entries: map.len(), counts, classes: map.len() - counts }
    }

    pub fn clear(&self) {
        self.map.write().unwrap().clear();
    }

    /// Loads JSON-lines records, skipping corrupt lines with a warning.
    /// A missing file is a cold cache, not an error.
    pub fn load(&self, path: &Path) -> std::io::Result<usize> {
        let file = match std::fs::File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(e),
        };
        let mut loaded = 0usize;
        for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Record>(&line).ok().and_then(|r| {
                decode_hex(&r.key).map(|key| (key, r.value, r.provenance))
            }) {
                Some((key, value, provenance)) => {
                    self.map.write().unwrap().insert(key, (value, provenance));
                    loaded += 1;
                }
                None => {
                    log::warn!("ignoring corrupt cache record at {}:{}", path.display(), lineno + 1);
                }
            }
        }
        Ok(loaded)
    }

    /// Writes all records, sorted by key for reproducible files.
    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let map = self.map.read().unwrap();
        let mut entries: Vec<(&Vec<u8>, &(CacheValue, Provenance))> = map.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        let mut out = Vec::new();
        for (key, (value, provenance)) in entries {
            let record = Record {
                key: encode_hex(key),
                value: value.clone(),
                provenance: provenance.clone(),
            };
            serde_json::to_writer(&mut out, &record)?;
            out.push(b'\n');
        }
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let mut file = std::fs::File::create(path)?;
        file.write_all(&out)
    }
}

fn encode_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn decode_hex(s: &str) -> Option<Vec<u8>> {
    if s.len() % 2 != 0 {
        return None;
    }
    (0..s.len() / 2).map(|i| u8::from_str_radix(&s[2 * i..2 * i + 2], 16).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calligraph::{basic_l, basic_r};
    use crate::class::{CLASS_L, CLASS_R};

    #[test]
    fn class_lookup_applies_swap_rule() {
        let cache = CacheStore::new();
        cache.put_class(&basic_l(), CLASS_L, Provenance::new("base"));
        // R is the mirror image of L, so its class comes out swapped.
        assert_eq!(cache.get_class(&basic_r()), Some(CLASS_R));
        assert_eq!(cache.get_class(&basic_l()), Some(CLASS_L));
        // The mirrored marking of L is R up to relabelling.
        assert_eq!(cache.get_class(&basic_l().mirrored()), Some(CLASS_R));
    }

    #[test]
    fn cold_lookup_misses() {
        let cache = CacheStore::new();
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(cache.get_count(&g), None);
    }

    #[test]
    fn persistence_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let cache = CacheStore::new();
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        cache.put_count(&g, 2, Provenance::new("fallback"));
        cache.put_class(&basic_l(), CLASS_L, Provenance::new("base"));
        cache.save(&path).unwrap();

        let reloaded = CacheStore::new();
        assert_eq!(reloaded.load(&path).unwrap(), 2);
        assert_eq!(reloaded.get_count(&g), Some(2));
        assert_eq!(reloaded.get_class(&basic_r()), Some(CLASS_R));
        assert_eq!(reloaded.stats(), CacheStats { entries: 2, counts: 1, classes: 1 });
    }

    #[test]
    fn corrupt_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        std::fs::write(
            &path,
            "not json\n{\"key\":\"zz\",\"kind\":\"count\",\"value\":1,\"provenance\":{\"method\":\"x\"}}\n",
        )
        .unwrap();
        let cache = CacheStore::new();
        assert_eq!(cache.load(&path).unwrap(), 0);
    }

    #[test]
    fn missing_file_is_cold() {
        let cache = CacheStore::new();
        assert_eq!(cache.load(Path::new("/nonexistent/cache.jsonl")).unwrap(), 0);
    }
}
