//! The layout file format: an instance plus one placement per cell, with
//! optional solver provenance. JSON, mirroring the instance schema.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use ollp_core::layout::Placement;
use ollp_core::{DoorSide, Instance, Layout};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlacementEntry {
    pub cell: usize,
    pub x: f64,
    pub y: f64,
    pub door_side: DoorSide,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayoutFile {
    pub instance: Instance,
    pub placements: Vec<PlacementEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl LayoutFile {
    pub fn from_layout(
        instance: &Instance,
        layout: &Layout,
        algo: Option<String>,
        seed: Option<u64>,
    ) -> LayoutFile {
        LayoutFile {
            instance: instance.clone(),
            placements: layout
                .placements
                .iter()
                .enumerate()
                .map(|(cell, p)| PlacementEntry {
                    cell,
                    x: p.center_x,
                    y: p.center_y,
                    door_side: p.door_side,
                })
                .collect(),
            algo,
            seed,
        }
    }

    /// Rebuild the geometric layout; placements may appear in any order but
    /// must cover every cell exactly once.
    pub fn to_layout(&self) -> Result<Layout> {
        let n = self.instance.len();
        if self.placements.len() != n {
            bail!(
                "layout has {} placements for {} cells",
                self.placements.len(),
                n
            );
        }
        let mut placements: Vec<Option<Placement>> = vec![None; n];
        for entry in &self.placements {
            if entry.cell >= n {
                bail!("placement for unknown cell {}", entry.cell);
            }
            if placements[entry.cell].is_some() {
                bail!("duplicate placement for cell {}", entry.cell);
            }
            if !(entry.x.is_finite() && entry.y.is_finite()) {
                bail!("placement for cell {} has non-finite coordinates", entry.cell);
            }
            placements[entry.cell] = Some(Placement::new(entry.x, entry.y, entry.door_side));
        }
        Ok(Layout::new(
            self.instance.specs.clone(),
            placements.into_iter().map(|p| p.unwrap()).collect(),
        ))
    }

    pub fn load(path: &Path) -> Result<LayoutFile> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("failed to read {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("failed to parse {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("layout file serializes");
        fs::write(path, text).with_context(|| format!("failed to write {}", path.display()))
    }
}
