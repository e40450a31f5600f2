//! Scene files: named boundary points, geodesics and configurations, a
//! limit-family specification and an optional group, all in versioned JSON.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use ghostpoly::{
    BoundaryPoint, Configuration, GhostError, GroupPresentation, LimitFamily, MobiusMap,
    OrientedGeodesic, ThetaGeodesic, ThetaSignature,
};

pub const SCENE_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub version: u32,
    #[serde(default)]
    pub points: BTreeMap<String, String>,
    #[serde(default)]
    pub geodesics: BTreeMap<String, GeodesicSpec>,
    #[serde(default)]
    pub configurations: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub theta: Option<ThetaSpec>,
    #[serde(default)]
    pub group: Vec<[[i64; 2]; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicSpec {
    pub src: String,
    pub dst: String,
    #[serde(default)]
    pub label: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: String,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaSpec {
    pub dims: Vec<usize>,
    pub ambient: usize,
}

/// A resolved scene: every name bound, the family constructed.
pub struct Scene {
    pub geodesics: BTreeMap<String, ThetaGeodesic>,
    pub configurations: BTreeMap<String, Configuration>,
    pub family: LimitFamily,
    pub group: GroupPresentation,
}

impl Scene {
    pub fn load(path: &Path) -> Result<Scene> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading scene file {}", path.display()))?;
        let file: SceneFile =
            serde_json::from_str(&text).with_context(|| "parsing scene JSON")?;
        Scene::from_file(file)
    }

    pub fn from_file(file: SceneFile) -> Result<Scene> {
        if file.version != SCENE_VERSION {
            bail!(
                "unsupported scene version {} (expected {SCENE_VERSION})",
                file.version
            );
        }
        let mut points: BTreeMap<String, BoundaryPoint> = BTreeMap::new();
        for (name, text) in &file.points {
            let p: BoundaryPoint = text
                .parse()
                .map_err(|e: GhostError| anyhow!("point `{name}`: {e}"))?;
            points.insert(name.clone(), p);
        }
        // a point reference is either a name or a literal
        let resolve_point = |r: &str| -> Result<BoundaryPoint> {
            if let Some(p) = points.get(r) {
                return Ok(p.clone());
            }
            r.parse()
                .map_err(|e: GhostError| anyhow!("unknown point `{r}` ({e})"))
        };

        let theta = match (&file.theta, &file.family) {
            (Some(t), _) => ThetaSignature::new(t.dims.clone(), t.ambient)
                .map_err(|e| anyhow!("theta: {e}"))?,
            (None, Some(f)) => ThetaSignature::projective(match f.kind.as_str() {
                "fuchsian" => 2,
                _ => f.dim.unwrap_or(2),
            }),
            (None, None) => ThetaSignature::projective(2),
        };

        let mut geodesics: BTreeMap<String, ThetaGeodesic> = BTreeMap::new();
        for (name, spec) in &file.geodesics {
            if !theta.valid_label(spec.label) {
                bail!(
                    "geodesic `{name}`: label {} out of range for the signature",
                    spec.label
                );
            }
            let g = OrientedGeodesic::new(resolve_point(&spec.src)?, resolve_point(&spec.dst)?);
            geodesics.insert(name.clone(), ThetaGeodesic::new(g, spec.label));
        }

        let mut configurations: BTreeMap<String, Configuration> = BTreeMap::new();
        for (name, members) in &file.configurations {
            let mut gs = Vec::with_capacity(members.len());
            for m in members {
                let g = geodesics
                    .get(m)
                    .ok_or_else(|| anyhow!("configuration `{name}`: unknown geodesic `{m}`"))?;
                gs.push(g.clone());
            }
            let c = Configuration::new(gs)
                .map_err(|e| anyhow!("configuration `{name}`: {e}"))?;
            configurations.insert(name.clone(), c);
        }

        let family = match &file.family {
            None => LimitFamily::fuchsian(),
            Some(f) => match f.kind.as_str() {
                "fuchsian" => LimitFamily::new(ghostpoly::FamilyKind::Fuchsian, theta.clone())
                    .map_err(|e| anyhow!("family: {e}"))?,
                "veronese" => LimitFamily::new(ghostpoly::FamilyKind::Veronese, theta.clone())
                    .map_err(|e| anyhow!("family: {e}"))?,
                "generic" => LimitFamily::new(
                    ghostpoly::FamilyKind::Generic {
                        seed: f.seed.unwrap_or(0),
                    },
                    theta.clone(),
                )
                .map_err(|e| anyhow!("family: {e}"))?,
                other => bail!("unknown family kind `{other}`"),
            },
        };

        let mut gens = Vec::new();
        for (i, m) in file.group.iter().enumerate() {
            let map = MobiusMap::new(m[0][0], m[0][1], m[1][0], m[1][1])
                .map_err(|e| anyhow!("group generator {i}: {e}"))?;
            gens.push(map);
        }
        let group = GroupPresentation::new(gens).map_err(|e| anyhow!("group: {e}"))?;

        Ok(Scene {
            geodesics,
            configurations,
            family,
            group,
        })
    }

    /// A named generator: a configuration, or a geodesic as its rank-1
    /// configuration.
    pub fn generator(&self, name: &str) -> Result<Configuration> {
        if let Some(c) = self.configurations.get(name) {
            return Ok(c.clone());
        }
        if let Some(g) = self.geodesics.get(name) {
            return Ok(Configuration::singleton(g.clone()));
        }
        bail!("unknown configuration or geodesic `{name}`")
    }

    pub fn geodesic(&self, name: &str) -> Result<&ThetaGeodesic> {
        self.geodesics
            .get(name)
            .ok_or_else(|| anyhow!("unknown geodesic `{name}`"))
    }
}
