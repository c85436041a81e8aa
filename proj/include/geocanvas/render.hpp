#pragma once

#include <string>

#include "geocanvas/canvas.hpp"

namespace geocanvas {

struct Viewport {
    double xmin = -10.0, xmax = 10.0;
    double ymin = -10.0, ymax = 10.0;
    int width = 640, height = 640;
};

/// Per-dimension defaults of a display preset; per-object style entries
/// override these.
struct StylePreset {
    std::string point_color;
    std::string line_color;
    std::string polygon_fill;
    double point_size;
    double line_thickness;
    double fill_opacity;
    bool axes;
    bool grid;
    std::string background;
    bool italic_labels;
    bool dashed_hidden_edges;
};

StylePreset preset_defaults(StylePresetKind kind);

/// Bounding box of all defined objects plus a 10% margin; the fixed default
/// viewport when the canvas is empty.
Viewport auto_viewport(const CanvasState& state, int width = 640, int height = 640);

/// Deterministic SVG 1.1 document for the canvas snapshot.
std::string render_svg(const CanvasState& state, const Viewport& viewport);

/// Switch the whole canvas to the textbook preset: repaints existing objects
/// and registers the preset for later ones. Idempotent; geometry untouched.
CanvasState apply_textbook_preset(const CanvasState& state);

}  // namespace geocanvas
