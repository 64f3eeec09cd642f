import type { MapMarker } from "./types";

// Tile-free marker panel: markers plotted in an SVG viewport scaled to
// their bounding box. Self-hostable by construction; a tile layer can be
// swapped in behind the same render call later.

const WIDTH = 360;
const HEIGHT = 260;
const PAD = 30;
const SVG_NS = "http://www.w3.org/2000/svg";

export interface MapCallbacks {
  onMarkerClick?: (stopIndex: number, cardIndex: number) => void;
  onSetStart?: (lat: number, lon: number) => void;
}

interface Placed extends MapMarker {
  x: number;
  y: number;
  stopIndex: number;
  cardIndex: number;
}

export function placeMarkers(markers: MapMarker[]): Placed[] {
  if (!markers.length) return [];
  const lats = markers.map((m) => m.lat);
  const lons = markers.map((m) => m.lon);
  const latMin = Math.min(...lats);
  const latMax = Math.max(...lats);
  const lonMin = Math.min(...lons);
  const lonMax = Math.max(...lons);
  const latSpan = Math.max(latMax - latMin, 1e-4);
  const lonSpan = Math.max(lonMax - lonMin, 1e-4);
  return markers.map((m, i) => ({
    ...m,
    // Longitude grows rightward, latitude grows upward (so y flips).
    x: PAD + ((m.lon - lonMin) / lonSpan) * (WIDTH - 2 * PAD),
    y: HEIGHT - PAD - ((m.lat - latMin) / latSpan) * (HEIGHT - 2 * PAD),
    stopIndex: 0,
    cardIndex: i,
  }));
}

export function renderMap(
  markers: MapMarker[],
  cardRefs: Array<{ stop: number; card: number }>,
  callbacks: MapCallbacks = {}
): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "map-panel";
  if (!markers.length) {
    panel.hidden = true;
    return panel;
  }

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("class", "map-canvas");
  svg.setAttribute("role", "img");
  svg.setAttribute("aria-label", "Result locations");

  svg.addEventListener("click", (event) => {
    if (!callbacks.onSetStart) return;
    const target = event.target as Element;
    if (target.closest("g[data-marker]")) return; // marker clicks are separate
    const rect = svg.getBoundingClientRect();
    if (rect.width === 0 || rect.height === 0) return;
    const x = ((event.clientX - rect.left) / rect.width) * WIDTH;
    const y = ((event.clientY - rect.top) / rect.height) * HEIGHT;
    const geo = unproject(markers, x, y);
    if (geo) callbacks.onSetStart(geo.lat, geo.lon);
  });

  const placed = placeMarkers(markers);
  placed.forEach((m, i) => {
    const ref = cardRefs[i] ?? { stop: 1, card: i };
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("data-marker", String(i));
    group.setAttribute("class", "map-marker");

    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", String(m.x));
    dot.setAttribute("cy", String(m.y));
    dot.setAttribute("r", "7");

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(m.x + 10));
    label.setAttribute("y", String(m.y + 4));
    label.textContent = m.distance_mi !== null ? `${m.label} (${m.distance_mi} mi)` : m.label;

    group.appendChild(dot);
    group.appendChild(label);
    group.addEventListener("click", () => callbacks.onMarkerClick?.(ref.stop, ref.card));
    svg.appendChild(group);
  });

  const hint = document.createElement("p");
  hint.className = "map-hint";
  hint.textContent = "Click a marker to jump to its card. Click empty map space to search from that point instead.";

  panel.appendChild(svg);
  panel.appendChild(hint);
  return panel;
}

/** Map panel coordinates back to lat/lon using the same bounding box. */
export function unproject(
  markers: MapMarker[],
  x: number,
  y: number
): { lat: number; lon: number } | null {
  if (!markers.length) return null;
  const lats = markers.map((m) => m.lat);
  const lons = markers.map((m) => m.lon);
  const latMin = Math.min(...lats);
  const latMax = Math.max(...lats);
  const lonMin = Math.min(...lons);
  const lonMax = Math.max(...lons);
  const latSpan = Math.max(latMax - latMin, 1e-4);
  const lonSpan = Math.max(lonMax - lonMin, 1e-4);
  const lon = lonMin + ((x - PAD) / (WIDTH - 2 * PAD)) * lonSpan;
  const lat = latMin + ((HEIGHT - PAD - y) / (HEIGHT - 2 * PAD)) * latSpan;
  if (!Number.isFinite(lat) || !Number.isFinite(lon)) return null;
  return { lat, lon };
}
