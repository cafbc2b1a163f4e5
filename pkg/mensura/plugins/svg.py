#!/usr/bin/env python
# encoding: utf-8

"""
    Plots as self-contained SVG documents, built with xml.dom.minidom, each
    written next to a CSV of the plotted points.

    Coordinates are written with a fixed number of decimals and documents
    carry no timestamps, so the same inputs give the same bytes.
"""

import csv
from dataclasses import dataclass, field
import io
import logging
import math
import os
from typing import List, Tuple
from xml.dom import minidom

import numpy as np

from .. import geometry, pi, propagate, regress
from ..util import MensuraError, UsageError

log = logging.getLogger(__name__)

PLOT_KINDS = ("pairs", "pi-scatter", "ellipse", "contours", "species-compare")
MARGIN = 56
SERIES_COLORS = ("#1f4e79", "#b5452c", "#3c7a3c", "#7a3c7a")
BAND_COLORS = (
    "#f7fbff",
    "#deebf7",
    "#c6dbef",
    "#9ecae1",
    "#6baed6",
    "#4292c6",
    "#2171b5",
    "#084594",
)


def _num(value):
    return f"{value:.3f}"


def _padded(low, high):
    if low == high:
        low, high = low - 0.5, high + 0.5
    pad = (high - low) * 0.05
    return low - pad, high + pad


@dataclass
class PlotOutput:
    kind: str
    svg: str
    header: Tuple[str, ...]
    rows: List[tuple] = field(default_factory=list)

    def csv_text(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows(
            [repr(cell) if isinstance(cell, float) else cell for cell in row]
            for row in self.rows
        )
        return buffer.getvalue()

    def write(self, directory):
        """Writes <kind>.svg and <kind>.csv into directory."""
        paths = []
        try:
            os.makedirs(directory, exist_ok=True)
            for extension, text in (("svg", self.svg), ("csv", self.csv_text())):
                path = os.path.join(directory, f"{self.kind}.{extension}")
                with open(path, "w", encoding="utf-8", newline="") as f:
                    f.write(text)
                log.debug("Wrote %s", path)
                paths.append(path)
        except OSError as e:
            raise MensuraError(f"{e.filename} {e.strerror}")
        return paths


class Panel:
    """One set of axes inside an SVG document."""

    def __init__(
        self, doc, parent, box, x_range, y_range, x_label="", y_label="", title=""
    ):
        self.doc = doc
        self.left, self.top, self.width, self.height = box
        self.x_range = _padded(*x_range)
        self.y_range = _padded(*y_range)
        self.group = doc.createElement("g")
        parent.appendChild(self.group)
        self._frame(x_label, y_label, title)

    def sx(self, x):
        low, high = self.x_range
        return self.left + (x - low) / (high - low) * self.width

    def sy(self, y):
        low, high = self.y_range
        return self.top + self.height - (y - low) / (high - low) * self.height

    def _element(self, name, **attributes):
        el = self.doc.createElement(name)
        for key, value in attributes.items():
            el.setAttribute(key.replace("_", "-"), str(value))
        self.group.appendChild(el)
        return el

    def text(self, x, y, content, **attributes):
        el = self._element("text", x=_num(x), y=_num(y), **attributes)
        el.appendChild(self.doc.createTextNode(content))
        return el

    def _frame(self, x_label, y_label, title):
        self._element(
            "rect",
            x=_num(self.left),
            y=_num(self.top),
            width=_num(self.width),
            height=_num(self.height),
            fill="none",
            stroke="#444444",
        )
        for value in self.x_range:
            self.text(
                self.sx(value),
                self.top + self.height + 14,
                f"{value:.4g}",
                text_anchor="middle",
            )
        for value in self.y_range:
            self.text(self.left - 4, self.sy(value), f"{value:.4g}", text_anchor="end")
        if x_label:
            self.text(
                self.left + self.width / 2,
                self.top + self.height + 30,
                x_label,
                text_anchor="middle",
            )
        if y_label:
            self.text(
                self.left - 40,
                self.top + self.height / 2,
                y_label,
                text_anchor="middle",
            )
        if title:
            self.text(
                self.left + self.width / 2, self.top - 8, title, text_anchor="middle"
            )

    def points(self, xs, ys, color=SERIES_COLORS[0], radius=3):
        for x, y in zip(xs, ys):
            self._element(
                "circle", cx=_num(self.sx(x)), cy=_num(self.sy(y)), r=radius, fill=color
            )

    def polyline(self, xs, ys, color="#000000", dashed=False):
        attributes = {"fill": "none", "stroke": color, "stroke_width": "1.5"}
        if dashed:
            attributes["stroke_dasharray"] = "4 3"
        coords = " ".join(
            f"{_num(self.sx(x))},{_num(self.sy(y))}" for x, y in zip(xs, ys)
        )
        self._element("polyline", points=coords, **attributes)

    def marker(self, x, y, label, color="#000000"):
        px, py = self.sx(x), self.sy(y)
        self._element(
            "path",
            d=f"M {_num(px - 5)} {_num(py)} L {_num(px + 5)} {_num(py)} "
            f"M {_num(px)} {_num(py - 5)} L {_num(px)} {_num(py + 5)}",
            stroke=color,
            stroke_width="2",
        )
        self.text(px + 7, py - 7, label)

    def cell(self, x0, x1, y0, y1, color):
        self._element(
            "rect",
            x=_num(self.sx(x0)),
            y=_num(self.sy(y1)),
            width=_num(self.sx(x1) - self.sx(x0)),
            height=_num(self.sy(y0) - self.sy(y1)),
            fill=color,
            stroke="none",
        )


class Figure:
    def __init__(self, width=640, height=480, title=""):
        self.width = width
        self.height = height
        self.doc = minidom.Document()
        self.svg = self.doc.createElement("svg")
        self.svg.setAttribute("xmlns", "http://www.w3.org/2000/svg")
        self.svg.setAttribute("width", str(width))
        self.svg.setAttribute("height", str(height))
        self.svg.setAttribute("viewBox", f"0 0 {width} {height}")
        self.svg.setAttribute("font-family", "sans-serif")
        self.svg.setAttribute("font-size", "10")
        self.doc.appendChild(self.svg)
        if title:
            el = self.doc.createElement("title")
            el.appendChild(self.doc.createTextNode(title))
            self.svg.appendChild(el)

    def panel(self, x_range, y_range, column=0, columns=1, **labels):
        width = (self.width - MARGIN) / columns - MARGIN
        box = (
            MARGIN + column * (width + MARGIN),
            MARGIN / 2 + 8,
            width,
            self.height - 1.75 * MARGIN,
        )
        return Panel(self.doc, self.svg, box, x_range, y_range, **labels)

    def to_xml(self):
        return self.doc.toprettyxml(indent="  ")


def _range(*arrays):
    values = np.concatenate([np.ravel(a) for a in arrays])
    return float(values.min()), float(values.max())


def pairs(dataset, width=640, height=480):
    """Measured d, h and V against each other."""
    d, h, v = dataset.dbh_ft, dataset.height_ft, dataset.volume_ft3
    figure = Figure(width, height, title=f"{dataset.name}: pairs")
    combos = (
        (d, h, "d (ft)", "h (ft)"),
        (d, v, "d (ft)", "V (ft^3)"),
        (h, v, "h (ft)", "V (ft^3)"),
    )
    for column, (x, y, x_label, y_label) in enumerate(combos):
        panel = figure.panel(
            _range(x), _range(y), column, len(combos), x_label=x_label, y_label=y_label
        )
        panel.points(x, y)
    rows = [(r.id, r.dbh_ft, r.height_ft, r.volume_ft3) for r in dataset]
    return PlotOutput("pairs", figure.to_xml(), ("id", "d_ft", "h_ft", "V_ft3"), rows)


def formulation_points(dataset, formulation):
    bases = pi.groups_for_trees()
    if formulation not in bases:
        raise UsageError(
            f"unknown formulation '{formulation}', expected one of {', '.join(bases)}"
        )
    basis = bases[formulation]
    x = np.array([pi.evaluate_group(basis["pi1"], r.quantities()) for r in dataset])
    y = np.array([pi.evaluate_group(basis["pi0"], r.quantities()) for r in dataset])
    return basis, x, y


def pi_scatter(dataset, formulation="a", width=640, height=480):
    """pi0 against pi1 for one formulation. For (a) and (c), where the DA
    model is a line through the origin, the cone (solid) and cylinder
    (dotted) lines are drawn too."""
    basis, x, y = formulation_points(dataset, formulation)
    rows = [("tree", r.id, float(xi), float(yi)) for r, xi, yi in zip(dataset, x, y)]
    lines = {}
    if formulation in ("a", "c"):
        ends = np.array([0.0, float(x.max())])
        lines = {
            "cone": geometry.CONE_GAMMA * ends,
            "cylinder": geometry.CYLINDER_GAMMA * ends,
        }
        for name, line in lines.items():
            rows += [(name, "", float(a), float(b)) for a, b in zip(ends, line)]

    y_values = [y] + list(lines.values())
    x_values = [x, np.array([0.0])] if lines else [x]
    figure = Figure(width, height, title=f"{dataset.name}: formulation ({formulation})")
    panel = figure.panel(
        _range(*x_values),
        _range(*y_values),
        x_label=str(basis["pi1"]),
        y_label=str(basis["pi0"]),
    )
    if lines:
        panel.polyline(ends, lines["cone"], color="#000000")
        panel.polyline(ends, lines["cylinder"], color="#000000", dashed=True)
    panel.points(x, y)
    return PlotOutput("pi-scatter", figure.to_xml(), ("series", "id", "x", "y"), rows)


def ellipse(dataset, level=0.999, da_gamma0=None, points=181, width=640, height=480):
    """Slice of the joint confidence region through (beta0, beta2), with the
    cone, cylinder and DA hypotheses marked."""
    fit = regress.log_regression(dataset.dbh_ft, dataset.height_ft, dataset.volume_ft3)
    boundary = regress.ellipse_boundary(fit, (0, 2), level, points)
    if da_gamma0 is None:
        _, x, y = formulation_points(dataset, "a")
        da_gamma0 = regress.fit_through_origin(x, y).gamma0
    markers = {
        "cylinder": (math.log(geometry.CYLINDER_GAMMA), 1.0),
        "cone": (math.log(geometry.CONE_GAMMA), 1.0),
        "da": (math.log(da_gamma0), 1.0),
        "estimate": (float(fit.coefficients[0]), float(fit.coefficients[2])),
    }
    marker_xy = np.array(list(markers.values()))
    figure = Figure(
        width, height, title=f"{dataset.name}: (beta0, beta2) region at {level}"
    )
    panel = figure.panel(
        _range(boundary[:, 0], marker_xy[:, 0]),
        _range(boundary[:, 1], marker_xy[:, 1]),
        x_label="beta0",
        y_label="beta2",
    )
    panel.polyline(boundary[:, 0], boundary[:, 1], color=SERIES_COLORS[0])
    for name, (bx, by) in markers.items():
        panel.marker(bx, by, name)
    rows = [("boundary", float(b0), float(b2)) for b0, b2 in boundary]
    rows += [(name, bx, by) for name, (bx, by) in markers.items()]
    return PlotOutput("ellipse", figure.to_xml(), ("series", "beta0", "beta2"), rows)


def contours(
    gamma0,
    d_range,
    h_range,
    error_model,
    standard_delta=False,
    width=640,
    height=480,
):
    """var(V) over a d x h grid, drawn as a banded map with one color per
    equal-width band of variance."""
    cells = propagate.variance_grid(
        gamma0, d_range, h_range, error_model, standard_delta
    )
    d_axis = propagate.grid_axis(*d_range)
    h_axis = propagate.grid_axis(*h_range)
    d_step = (d_axis[-1] - d_axis[0]) / (len(d_axis) - 1)
    h_step = (h_axis[-1] - h_axis[0]) / (len(h_axis) - 1)
    variances = np.array([c.variance for c in cells])
    low, high = float(variances.min()), float(variances.max())
    span = (high - low) or 1.0

    figure = Figure(width, height, title="var(V) in ft^6")
    panel = figure.panel(
        (d_axis[0] - d_step / 2, d_axis[-1] + d_step / 2),
        (h_axis[0] - h_step / 2, h_axis[-1] + h_step / 2),
        x_label="d (ft)",
        y_label="h (ft)",
    )
    for c in cells:
        band = int((c.variance - low) / span * len(BAND_COLORS))
        band = min(band, len(BAND_COLORS) - 1)
        panel.cell(
            c.d - d_step / 2,
            c.d + d_step / 2,
            c.h - h_step / 2,
            c.h + h_step / 2,
            BAND_COLORS[band],
        )
    return PlotOutput(
        "contours", figure.to_xml(), propagate.GRID_HEADER, propagate.grid_rows(cells)
    )


def species_compare(datasets, width=640, height=480):
    """Formulation (a) for several species, each with its own DA line."""
    if len(datasets) < 2:
        raise UsageError("species-compare needs a second dataset (--csv)")
    series = []
    for dataset in datasets:
        _, x, y = formulation_points(dataset, "a")
        series.append((dataset, x, y, regress.fit_through_origin(x, y)))

    xs = [s[1] for s in series] + [np.array([0.0])]
    ys = [s[2] for s in series]
    figure = Figure(width, height, title="formulation (a) by species")
    panel = figure.panel(_range(*xs), _range(*ys), x_label="d^2/h^2", y_label="V/h^3")
    rows = []
    for i, (dataset, x, y, fit) in enumerate(series):
        color = SERIES_COLORS[i % len(SERIES_COLORS)]
        ends = np.array([0.0, float(x.max())])
        panel.polyline(ends, fit.gamma0 * ends, color=color)
        panel.points(x, y, color=color)
        panel.text(
            panel.sx(float(x.max())),
            panel.sy(fit.gamma0 * float(x.max())) - 6,
            f"{dataset.name} {fit.gamma0:.4g}",
        )
        rows += [
            (dataset.name, r.id, float(a), float(b), fit.gamma0)
            for r, a, b in zip(dataset, x, y)
        ]
    header = ("species", "id", "x", "y", "gamma0")
    return PlotOutput("species-compare", figure.to_xml(), header, rows)
