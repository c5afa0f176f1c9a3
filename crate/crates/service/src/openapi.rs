use serde_json::{json, Value};

fn envelope_ref() -> Value {
    json!({ "content": { "application/json": { "schema": { "$ref": "#/components/schemas/Envelope" } } } })
}

fn op(summary: &str, body: bool) -> Value {
    let mut o = json!({
        "summary": summary,
        "responses": {
            "200": envelope_ref(),
            "400": envelope_ref(),
            "404": envelope_ref(),
        },
    });
    if body {
        o["requestBody"] = json!({ "required": true, "content": { "application/json": { "schema": { "type": "object" } } } });
        o["responses"]["409"] = envelope_ref();
    }
    o
}

fn id_param() -> Value {
    json!([{ "name": "id", "in": "path", "required": true, "schema": { "type": "string" } }])
}

/// The OpenAPI document served at `/spec`.
pub fn document() -> Value {
    let mut paths = serde_json::Map::new();
    let mut add = |path: &str, method: &str, summary: &str, body: bool| {
        let entry = paths.entry(path.to_string()).or_insert_with(|| json!({}));
        let mut o = op(summary, body);
        if path.contains("{id}") {
            o["parameters"] = id_param();
        }
        entry[method] = o;
    };
    add("/sessions", "get", "List sessions", false);
    add("/sessions", "post", "Create a session from a goal {system, goal, assumptions?}", true);
    add("/sessions/{id}", "get", "Session state and history", false);
    add("/sessions/{id}/applicable", "get", "Rules applicable to open goal `goal` (query parameter)", false);
    add("/sessions/{id}/apply", "post", "Apply a rule {revision, goal, rule}", true);
    add("/sessions/{id}/goto", "post", "Move to a history entry {revision, index}", true);
    add("/sessions/{id}/undo", "post", "Move to the parent entry {revision}", true);
    add("/sessions/{id}/redo", "post", "Move to the newest child entry {revision}", true);
    add("/sessions/{id}/export", "get", "Current script and the session file", false);
    add("/sessions/{id}/warnings", "get", "Prover assessments of the open goals", false);
    add("/check", "post", "Check a script {script, format?, axioms?, axiom_text?}", true);
    add("/prove", "post", "Run the prover {formula | sequent, budget?}", true);
    add("/countermodel", "post", "Search finite countermodels {formula | sequent, max_size?, budget?}", true);
    add("/assignments", "post", "Create an assignment {id, system, goal, due?}", true);
    add("/assignments/{id}/submit", "post", "Submit a session {student, session, timestamp?}", true);
    add("/assignments/{id}/progress", "get", "Latest submission per student", false);
    json!({
        "openapi": "3.0.3",
        "info": { "title": "secav", "version": env!("CARGO_PKG_VERSION") },
        "paths": paths,
        "components": { "schemas": { "Envelope": envelope_schema() } },
    })
}

/// JSON schema every response body satisfies.
pub fn envelope_schema() -> Value {
    json!({
        "oneOf": [
            {
                "type": "object",
                "required": ["ok", "data"],
                "additionalProperties": false,
                "properties": { "ok": { "enum": [true] }, "data": {} },
            },
            {
                "type": "object",
                "required": ["ok", "error"],
                "additionalProperties": false,
                "properties": {
                    "ok": { "enum": [false] },
                    "error": {
                        "type": "object",
                        "required": ["code", "message"],
                        "additionalProperties": false,
                        "properties": {
                            "code": { "type": "string" },
                            "message": { "type": "string" },
                            "detail": {},
                        },
                    },
                },
            },
        ],
    })
}
