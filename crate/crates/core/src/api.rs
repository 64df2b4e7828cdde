//! JSON API as a pure request → response function; the CLI's `serve` command puts it
//! behind an HTTP listener.
//!
//! | route | body | reply |
//! |---|---|---|
//! | `GET /api/health` | | `{"status": "ok"}` |
//! | `GET /api/recipes` | | every recipe with its parameter schema |
//! | `POST /api/mesh` | [`MeshJob`] or `{"recipe", "params", "t", "resolution"}` | geometry envelope |
//! | `POST /api/spiral` | [`SpiralJob`] or `{"recipe", "params"}` | geometry envelope |
//!
//! Failures reply `{"error": {"code", "message"}}` with 400 (invalid input), 422 (numeric
//! domain), 404 or 405.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::export::Envelope;
use crate::figures::{build_figure, figure_envelope, FigureId, FigureRecipe, OutputFormat};
use crate::job::{MeshJob, SpiralJob};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiResponse {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
}

impl ApiResponse {
    fn json(status: u16, value: &Value) -> Self {
        let mut body = serde_json::to_vec(value).unwrap_or_default();
        body.push(b'\n');
        ApiResponse {
            status,
            content_type: "application/json",
            body,
        }
    }

    fn envelope(env: &Envelope) -> Self {
        match env.to_bytes() {
            Ok(body) => ApiResponse {
                status: 200,
                content_type: "application/json",
                body,
            },
            Err(e) => ApiResponse::error(&Error::from(e)),
        }
    }

    fn failure(status: u16, code: &str, message: &str) -> Self {
        ApiResponse::json(status, &json!({"error": {"code": code, "message": message}}))
    }

    pub fn error(e: &Error) -> Self {
        let (category, code) = e.classify();
        ApiResponse::failure(category.http_status(), code, &e.to_string())
    }
}

/// Recipe reference in a mesh or spiral request.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecipeRequest {
    recipe: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default)]
    t: Option<f64>,
    #[serde(default)]
    resolution: Option<f64>,
}

impl RecipeRequest {
    fn recipe(self) -> Result<FigureRecipe, Error> {
        let id: FigureId = self.recipe.parse()?;
        let mut recipe = FigureRecipe::new(id).with_format(OutputFormat::Json);
        recipe.overrides = self.params;
        if let Some(t) = self.t {
            recipe.overrides.insert("t".into(), t);
        }
        if let Some(r) = self.resolution {
            recipe.overrides.insert("resolution".into(), r);
        }
        Ok(recipe)
    }
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiResponse> {
    serde_json::from_slice(body).map_err(|e| ApiResponse::failure(400, "INVALID_JSON", &e.to_string()))
}

fn is_recipe_request(body: &[u8]) -> Result<bool, ApiResponse> {
    let v: Value = parse_body(body)?;
    Ok(v.get("recipe").is_some())
}

fn recipe_response(body: &[u8], planar: bool) -> ApiResponse {
    let req: RecipeRequest = match parse_body(body) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    let result = req.recipe().and_then(|recipe| {
        if recipe.id.is_planar() != planar {
            let route = if recipe.id.is_planar() { "/api/spiral" } else { "/api/mesh" };
            return Err(Error::Invalid(format!("recipe {} is served by {route}", recipe.id)));
        }
        let geometry = build_figure(&recipe)?;
        Ok(figure_envelope(&recipe, &geometry)?)
    });
    match result {
        Ok(env) => ApiResponse::envelope(&env),
        Err(e) => ApiResponse::error(&e),
    }
}

fn mesh(body: &[u8]) -> ApiResponse {
    match is_recipe_request(body) {
        Err(resp) => resp,
        Ok(true) => recipe_response(body, false),
        Ok(false) => {
            let job: MeshJob = match parse_body(body) {
                Ok(j) => j,
                Err(resp) => return resp,
            };
            match job.run() {
                Ok(mesh) => ApiResponse::envelope(&job.envelope(&mesh)),
                Err(e) => ApiResponse::error(&e),
            }
        }
    }
}

fn spiral(body: &[u8]) -> ApiResponse {
    match is_recipe_request(body) {
        Err(resp) => resp,
        Ok(true) => recipe_response(body, true),
        Ok(false) => {
            let job: SpiralJob = match parse_body(body) {
                Ok(j) => j,
                Err(resp) => return resp,
            };
            match job.run() {
                Ok(out) => ApiResponse::envelope(&job.envelope(&out)),
                Err(e) => ApiResponse::error(&e),
            }
        }
    }
}

/// Recipe listing served by `GET /api/recipes`.
pub fn recipes_json() -> Value {
    let recipes: Vec<Value> = FigureId::ALL
        .iter()
        .map(|&id| {
            let formats: Vec<&str> = [OutputFormat::Svg, OutputFormat::Obj, OutputFormat::Json]
                .into_iter()
                .filter(|&f| id.supports(f))
                .map(OutputFormat::extension)
                .collect();
            json!({
                "id": id.name(),
                "title": id.title(),
                "view": if id.is_planar() { "spiral" } else { "surface" },
                "endpoint": if id.is_planar() { "/api/spiral" } else { "/api/mesh" },
                "default_format": id.default_format().extension(),
                "formats": formats,
                "params": id.params(),
            })
        })
        .collect();
    json!({ "recipes": recipes })
}

fn route(method: &str, path: &str, body: &[u8]) -> ApiResponse {
    let path = path.split(['?', '#']).next().unwrap_or_default();
    let path = path.strip_suffix('/').filter(|p| !p.is_empty()).unwrap_or(path);
    let allowed = match path {
        "/api/health" | "/api/recipes" => "GET",
        "/api/mesh" | "/api/spiral" => "POST",
        _ => return ApiResponse::failure(404, "NOT_FOUND", &format!("no route {path}")),
    };
    if method != allowed {
        return ApiResponse::failure(405, "METHOD_NOT_ALLOWED", &format!("{path} accepts {allowed}"));
    }
    match path {
        "/api/health" => ApiResponse::json(200, &json!({"status": "ok"})),
        "/api/recipes" => ApiResponse::json(200, &recipes_json()),
        "/api/mesh" => mesh(body),
        _ => spiral(body),
    }
}

/// Handles one request. Never panics; an internal fault becomes a 500 reply.
pub fn handle(method: &str, path: &str, body: &[u8]) -> ApiResponse {
    catch_unwind(AssertUnwindSafe(|| route(method, path, body)))
        .unwrap_or_else(|_| ApiResponse::failure(500, "INTERNAL", "internal error"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(r: &ApiResponse) -> Value {
        serde_json::from_slice(&r.body).unwrap()
    }

    #[test]
    fn health_and_routing() {
        let r = handle("GET", "/api/health", b"");
        assert_eq!((r.status, body(&r)["status"].as_str()), (200, Some("ok")));
        assert_eq!(handle("GET", "/api/nope", b"").status, 404);
        assert_eq!(handle("POST", "/api/health", b"").status, 405);
        assert_eq!(handle("GET", "/api/mesh", b"").status, 405);
    }

    #[test]
    fn recipes_listing() {
        let v = body(&handle("GET", "/api/recipes", b""));
        let recipes = v["recipes"].as_array().unwrap();
        assert_eq!(recipes.len(), 8);
        let fig4 = recipes.iter().find(|r| r["id"] == "fig4").unwrap();
        let t = fig4["params"].as_array().unwrap().iter().find(|p| p["name"] == "t").unwrap();
        assert_eq!(t["min"], 0.0);
        assert_eq!(t["exclusive_min"], true);
    }

    #[test]
    fn mesh_recipe_peak() {
        let r = handle("POST", "/api/mesh", br#"{"recipe": "fig12a", "t": 1, "resolution": 65}"#);
        assert_eq!(r.status, 200);
        let v = body(&r);
        let verts = v["items"][0]["geometry"]["vertices"].as_array().unwrap();
        let top = verts.iter().map(|p| p[2].as_f64().unwrap()).fold(f64::MIN, f64::max);
        assert_eq!(top, 1.0);
    }

    #[test]
    fn error_statuses() {
        let r = handle("POST", "/api/mesh", br#"{"recipe": "fig12a", "t": -1, "resolution": 65}"#);
        assert_eq!((r.status, body(&r)["error"]["code"].as_str()), (422, Some("TIME_NOT_POSITIVE")));
        let r = handle("POST", "/api/mesh", br#"{"expr": "abs(x*y)^(1/t)", "kind": "heightfield", "t": -1}"#);
        assert_eq!((r.status, body(&r)["error"]["code"].as_str()), (422, Some("TIME_NOT_POSITIVE")));
        let r = handle("POST", "/api/mesh", br#"{"expr": "x $ y", "kind": "heightfield"}"#);
        assert_eq!((r.status, body(&r)["error"]["code"].as_str()), (400, Some("LEX_ERROR")));
        let r = handle("POST", "/api/mesh", b"{not json");
        assert_eq!((r.status, body(&r)["error"]["code"].as_str()), (400, Some("INVALID_JSON")));
        let r = handle("POST", "/api/mesh", br#"{"recipe": "fig7"}"#);
        assert_eq!(r.status, 400);
        let r = handle("POST", "/api/spiral", br#"{"recipe": "fig99"}"#);
        assert_eq!((r.status, body(&r)["error"]["code"].as_str()), (400, Some("UNKNOWN_RECIPE")));
    }

    #[test]
    fn spiral_requests_are_deterministic() {
        let req = br#"{"recipe": "fig8", "params": {"t": 0.5}}"#;
        let a = handle("POST", "/api/spiral", req);
        let b = handle("POST", "/api/spiral", req);
        assert_eq!(a.status, 200);
        assert_eq!(a, b);
        let r = handle("POST", "/api/spiral", br#"{"kind": "golden", "n": 5}"#);
        assert_eq!(body(&r)["items"][0]["geometry"]["arcs"].as_array().unwrap().len(), 5);
    }
}
