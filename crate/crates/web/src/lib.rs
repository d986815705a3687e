//! Browser bindings. Each operation returns text or an error message, so the
//! page never has to deal with exceptions beyond showing a string.

use serde_json::json;
use wasm_bindgen::prelude::*;

use steinmann_core::arrangement::{shard_to_json, Atlas};
use steinmann_core::calculus::{dual_forest_derivative, ShardVector};
use steinmann_core::exactla::SparseVector;
use steinmann_core::forests::parse_forest_over;
use steinmann_core::ground::{parse_partition_inferring_ground, GroundSet, Partition};
use steinmann_core::render::render_svg;
use steinmann_core::steinmann::steinmann_relations;

/// Largest ground set the page offers; bigger sizes take too long in a tab.
pub const MAX_N: usize = 5;

fn size(n: usize) -> Result<(), String> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must be between 1 and {}", MAX_N))
    }
}

/// One JSON line per shard on the given support, e.g. `(12|34)`.
pub fn enumerate(partition: &str) -> Result<String, String> {
    let (ground, p) = parse_partition_inferring_ground(partition).map_err(|e| e.to_string())?;
    size(ground.len())?;
    let atlas = Atlas::new(ground.len()).map_err(|e| e.to_string())?;
    let basis = atlas.basis(&p).map_err(|e| e.to_string())?;
    let mut text = String::new();
    for s in basis.shards() {
        text += &serde_json::to_string(&shard_to_json(&ground, s)).map_err(|e| e.to_string())?;
        text.push('\n');
    }
    Ok(text)
}

/// Shard count, relation rank and quotient dimension for `n` labels.
pub fn stein_rank(n: usize) -> Result<String, String> {
    size(n)?;
    let atlas = Atlas::new(n).map_err(|e| e.to_string())?;
    let rel = steinmann_relations(&atlas).map_err(|e| e.to_string())?;
    let shards = rel.basis().len();
    let doc = json!({
        "n": n,
        "shards": shards,
        "relations": rel.len(),
        "rank": rel.rank(),
        "quotient_dim": shards - rel.rank(),
    });
    Ok(doc.to_string())
}

/// SVG of the arrangement for `n` = 3 or 4. A non-empty `forest` shades the
/// chambers by the coefficients of its dual derivative of the point.
pub fn render(n: usize, forest: &str) -> Result<String, String> {
    let atlas = Atlas::new(n).map_err(|e| e.to_string())?;
    let forest = forest.trim();
    if forest.is_empty() {
        return render_svg(&atlas, None).map_err(|e| e.to_string());
    }
    let ground = GroundSet::numeric(n).map_err(|e| e.to_string())?;
    let f =
        parse_forest_over(&ground, &Partition::one_block(n), forest).map_err(|e| e.to_string())?;
    let basis = atlas.basis(f.target()).map_err(|e| e.to_string())?;
    if basis.len() != 1 {
        return Err("the forest must end in singletons".into());
    }
    let point =
        ShardVector::from_coeffs(basis, SparseVector::unit(0)).map_err(|e| e.to_string())?;
    let v = dual_forest_derivative(&atlas, &f, &point).map_err(|e| e.to_string())?;
    render_svg(&atlas, Some(&v)).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = enumerate)]
pub fn enumerate_js(partition: &str) -> Result<String, JsValue> {
    enumerate(partition).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = steinRank)]
pub fn stein_rank_js(n: usize) -> Result<String, JsValue> {
    stein_rank(n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = render)]
pub fn render_js(n: usize, forest: &str) -> Result<String, JsValue> {
    render(n, forest).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_six_shards() {
        assert_eq!(enumerate("(123)").unwrap().lines().count(), 6);
        assert!(enumerate("(123456)").is_err());
    }

    #[test]
    fn rank_matches_known_dimension() {
        let v: serde_json::Value = serde_json::from_str(&stein_rank(4).unwrap()).unwrap();
        assert_eq!(v["quotient_dim"], 26);
    }

    #[test]
    fn renders_with_and_without_forest() {
        assert_eq!(render(3, "").unwrap().matches("<path ").count(), 6);
        let a = render(4, "[[1,2],[3,4]]@0,1,2").unwrap();
        let b = render(4, "[[1,2],[3,4]]@0,2,1").unwrap();
        assert_ne!(a, b);
        assert!(render(4, "[[1,2],[3,4]]").is_err());
        assert!(render(5, "").is_err());
    }
}
