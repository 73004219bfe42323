//! Memoized access to catalogs and quotients, with degree ceilings and the
//! on-disk cache.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use num_rational::BigRational;

use crate::canon::AsMode;
use crate::enumerate::{connected_classes, full_classes, Catalog, CatalogStore, ConnectedClasses, Space};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::relations::Quotient;
use crate::vector::GraphVector;

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub cache_dir: Option<PathBuf>,
    pub limit_cmc: usize,
    pub limit_ecmc: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { cache_dir: None, limit_cmc: 15, limit_ecmc: 9 }
    }
}

#[derive(Debug, Default)]
pub struct Engine {
    config: EngineConfig,
    store: CatalogStore,
    connected: Mutex<Option<Arc<ConnectedClasses>>>,
    catalogs: Mutex<HashMap<(Space, AsMode, usize), Arc<Catalog>>>,
    quotients: Mutex<HashMap<(Space, usize, bool), Arc<Quotient>>>,
    cache_hits: AtomicUsize,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Engine {
        let store = CatalogStore::new(config.cache_dir.clone());
        Engine { config, store, ..Default::default() }
    }

    /// An engine without disk cache and with both ceilings raised to `limit`.
    pub fn with_limit(limit: usize) -> Engine {
        Engine::new(EngineConfig { cache_dir: None, limit_cmc: limit, limit_ecmc: limit })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn limit(&self, space: Space) -> usize {
        match space {
            Space::Cmc => self.config.limit_cmc,
            Space::Ecmc => self.config.limit_ecmc,
        }
    }

    /// Number of catalogs served from the disk cache so far.
    pub fn cache_hits(&self) -> usize {
        self.cache_hits.load(Ordering::Relaxed)
    }

    /// `ResourceLimit` when `m` exceeds the ceiling for `space`.
    pub fn check(&self, m: usize, space: Space) -> Result<()> {
        let limit = self.limit(space);
        if m > limit {
            return Err(Error::ResourceLimit { degree: m, limit });
        }
        Ok(())
    }

    fn connected_upto(&self, m: usize) -> Arc<ConnectedClasses> {
        if let Some(c) = self.connected.lock().unwrap().as_ref() {
            if c.max_degree >= m {
                return Arc::clone(c);
            }
        }
        let fresh = Arc::new(connected_classes(m));
        let mut slot = self.connected.lock().unwrap();
        match slot.as_ref() {
            Some(c) if c.max_degree >= m => Arc::clone(c),
            _ => {
                *slot = Some(Arc::clone(&fresh));
                fresh
            }
        }
    }

    pub fn enum_cmc(&self, m: usize) -> Result<Arc<Catalog>> {
        self.catalog(m, Space::Cmc)
    }

    pub fn enum_ecmc(&self, m: usize) -> Result<Arc<Catalog>> {
        self.catalog(m, Space::Ecmc)
    }

    /// The sub-catalog of connected classes. The empty graph is not connected.
    pub fn enum_connected(&self, m: usize, space: Space) -> Result<Arc<Catalog>> {
        Ok(Arc::new(self.catalog(m, space)?.connected_part()))
    }

    pub fn catalog(&self, m: usize, space: Space) -> Result<Arc<Catalog>> {
        self.catalog_with_mode(m, space, space.default_mode())
    }

    pub fn catalog_with_mode(&self, m: usize, space: Space, mode: AsMode) -> Result<Arc<Catalog>> {
        self.check(m, space)?;
        assert!(mode != AsMode::Raw, "catalogs are taken modulo AS");
        if let Some(c) = self.catalogs.lock().unwrap().get(&(space, mode, m)) {
            return Ok(Arc::clone(c));
        }
        let cat = match self.store.load(space, mode, m)? {
            Some(c) => {
                self.cache_hits.fetch_add(1, Ordering::Relaxed);
                c
            }
            None => {
                let conn = self.connected_upto(m);
                let cat = Catalog::new(m, space, mode, false, full_classes(m, space, mode, &conn));
                self.store.save(&cat)?;
                cat
            }
        };
        let cat = Arc::new(cat);
        self.catalogs.lock().unwrap().insert((space, mode, m), Arc::clone(&cat));
        Ok(cat)
    }

    pub fn quotient(&self, m: usize, space: Space, connected: bool) -> Result<Arc<Quotient>> {
        if let Some(q) = self.quotients.lock().unwrap().get(&(space, m, connected)) {
            return Ok(Arc::clone(q));
        }
        let cat = if connected { self.enum_connected(m, space)? } else { self.catalog(m, space)? };
        let q = Arc::new(Quotient::new(&cat)?);
        self.quotients.lock().unwrap().insert((space, m, connected), Arc::clone(&q));
        Ok(q)
    }

    /// `#classes - rank` of the IHX rows over the selected catalog.
    pub fn quotient_dim(&self, m: usize, space: Space, connected_only: bool) -> Result<usize> {
        Ok(self.quotient(m, space, connected_only)?.dim())
    }

    /// Coordinates of a degree-`m` vector in the quotient basis. Terms are
    /// re-canonicalized for `space`; on the extended space interval terms vanish.
    pub fn reduce_to_basis(&self, v: &GraphVector, m: usize, space: Space) -> Result<Vec<BigRational>> {
        if let Ok(Some(d)) | Err((d, _)) = v.degree() {
            if d != m {
                return Err(Error::DegreeMismatch { expected: m, found: d });
            }
        }
        let mut canon = GraphVector::new();
        for (k, c) in v.iter() {
            let g: Graph = k.parse()?;
            if space == Space::Cmc && g.univalent_count() > 0 {
                return Err(Error::UnknownClass(k.to_string()));
            }
            if space == Space::Ecmc && g.has_interval_component() {
                continue;
            }
            canon.add_graph(&g, space.default_mode(), c);
        }
        self.quotient(m, space, false)?.reduce(&canon)
    }
}

/// Degree-`m` dimension of the free commutative algebra with `generators[d]`
/// generators in degree `d`.
pub fn symmetric_algebra_dim(generators: &[usize], m: usize) -> usize {
    let mut series = vec![0usize; m + 1];
    series[0] = 1;
    for (d, &count) in generators.iter().enumerate().skip(1) {
        if d > m {
            break;
        }
        for _ in 0..count {
            for i in d..=m {
                series[i] += series[i - d];
            }
        }
    }
    series[m]
}
