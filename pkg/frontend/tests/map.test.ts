import { describe, expect, it, vi } from "vitest";

import { placeMarkers, renderMap, unproject } from "../src/map";
import type { MapMarker } from "../src/types";

const markers: MapMarker[] = [
  { label: "North", lat: 40.01, lon: -75.14, distance_mi: "0.3" },
  { label: "South", lat: 39.94, lon: -75.16, distance_mi: "1.2" },
  { label: "East", lat: 39.97, lon: -75.10, distance_mi: null },
];

describe("placeMarkers", () => {
  it("preserves relative geometry", () => {
    const placed = placeMarkers(markers);
    const byLabel = Object.fromEntries(placed.map((p) => [p.label, p]));
    expect(byLabel.North.y).toBeLessThan(byLabel.South.y); // higher latitude sits higher
    expect(byLabel.East.x).toBeGreaterThan(byLabel.South.x); // greater longitude sits right
  });

  it("empty input stays empty", () => {
    expect(placeMarkers([])).toEqual([]);
  });
});

describe("unproject", () => {
  it("round-trips a marker position back to its coordinates", () => {
    const placed = placeMarkers(markers);
    for (const p of placed) {
      const geo = unproject(markers, p.x, p.y)!;
      expect(geo.lat).toBeCloseTo(p.lat, 6);
      expect(geo.lon).toBeCloseTo(p.lon, 6);
    }
  });
});

describe("renderMap", () => {
  it("renders one marker per card with distance labels", () => {
    const panel = renderMap(markers, [
      { stop: 1, card: 0 },
      { stop: 1, card: 1 },
      { stop: 2, card: 0 },
    ]);
    const nodes = panel.querySelectorAll(".map-marker");
    expect(nodes.length).toBe(3);
    expect(nodes[0].textContent).toContain("North (0.3 mi)");
    expect(nodes[2].textContent).toBe("East"); // no distance when unranked
  });

  it("marker click reports its card reference", () => {
    const onMarkerClick = vi.fn();
    const panel = renderMap(markers, [{ stop: 1, card: 0 }], { onMarkerClick });
    panel
      .querySelector(".map-marker")!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(onMarkerClick).toHaveBeenCalledWith(1, 0);
  });

  it("no markers hides the panel", () => {
    const panel = renderMap([], []);
    expect(panel.hidden).toBe(true);
  });
});
