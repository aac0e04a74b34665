use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use chordblend_core::idiom::presets;
use chordblend_core::Idiom;
use serde::Serialize;

use crate::error::AppError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdiomKind {
    Preset,
    Trained,
}

impl IdiomKind {
    pub fn parse(s: &str) -> Option<IdiomKind> {
        match s {
            "preset" => Some(IdiomKind::Preset),
            "trained" => Some(IdiomKind::Trained),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub tonic: u8,
    pub chord_count: usize,
    pub kind: IdiomKind,
}

/// Named idioms shared by concurrent requests. Reads take a shared lock;
/// registration takes it exclusively.
#[derive(Debug)]
pub struct Registry {
    idioms: RwLock<BTreeMap<String, (Arc<Idiom>, IdiomKind)>>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::with_presets()
    }
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            idioms: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn with_presets() -> Self {
        let registry = Self::empty();
        for idiom in presets() {
            registry
                .insert(idiom, IdiomKind::Preset)
                .expect("preset names are distinct");
        }
        registry
    }

    pub fn insert(&self, idiom: Idiom, kind: IdiomKind) -> Result<Arc<Idiom>, AppError> {
        let mut idioms = self.idioms.write().unwrap_or_else(|e| e.into_inner());
        let name = idiom.name().to_string();
        if idioms.contains_key(&name) {
            return Err(AppError::Conflict(name));
        }
        let idiom = Arc::new(idiom);
        idioms.insert(name, (Arc::clone(&idiom), kind));
        Ok(idiom)
    }

    pub fn get(&self, name: &str) -> Result<Arc<Idiom>, AppError> {
        let idioms = self.idioms.read().unwrap_or_else(|e| e.into_inner());
        idioms
            .get(name)
            .map(|(idiom, _)| Arc::clone(idiom))
            .ok_or_else(|| AppError::UnknownIdiom(name.to_string()))
    }

    /// Catalog sorted by name, optionally restricted to one kind.
    pub fn catalog(&self, kind: Option<IdiomKind>) -> Vec<CatalogEntry> {
        let idioms = self.idioms.read().unwrap_or_else(|e| e.into_inner());
        idioms
            .iter()
            .filter(|(_, (_, k))| kind.is_none_or(|want| *k == want))
            .map(|(name, (idiom, k))| CatalogEntry {
                name: name.clone(),
                tonic: idiom.tonic().value(),
                chord_count: idiom.chords().len(),
                kind: *k,
            })
            .collect()
    }
}
