import { describe, expect, it } from "vitest";

import { renderAnswer, renderCard, toggleCardDetails } from "../src/cards";
import libraryAnswer from "./fixtures/library_answer.json";
import type { QueryResponse } from "../src/types";

const answer = libraryAnswer as QueryResponse;
const card = answer.stop_plan!.stops[0].cards[0];

function fieldValue(node: HTMLElement, label: string): string | undefined {
  for (const row of Array.from(node.querySelectorAll(".card-field"))) {
    const l = row.querySelector(".card-field-label")?.textContent;
    if (l === label) return row.querySelector(".card-field-value")?.textContent ?? undefined;
  }
  return undefined;
}

describe("renderCard", () => {
  it("visible fields byte-match the API card", () => {
    const node = renderCard(card, 1, 0);
    expect(node.querySelector(".card-title")!.textContent).toBe(card.org_name);
    expect(fieldValue(node, "Distance:")).toBe(`${card.distance_mi} miles away`);
    expect(fieldValue(node, "Phone:")).toBe(card.phone);
    expect(fieldValue(node, "Address:")).toBe(card.address);
    expect(fieldValue(node, "Time:")).toBe(card.hours_line);
    expect(fieldValue(node, "Services:")).toBe(card.services.join(", "));
  });

  it("details start hidden and expand to show full weekly hours", () => {
    const node = renderCard(card, 1, 0);
    const details = node.querySelector<HTMLElement>(".card-details")!;
    expect(details.hidden).toBe(true);

    toggleCardDetails(node);
    expect(details.hidden).toBe(false);
    const hourLines = Array.from(details.querySelectorAll(".card-weekly-hours li")).map(
      (li) => li.textContent
    );
    expect(hourLines).toEqual(card.details.weekly_hours);

    toggleCardDetails(node);
    expect(details.hidden).toBe(true);
  });

  it("expanding one card leaves others unchanged", () => {
    const a = renderCard(card, 1, 0);
    const b = renderCard(card, 1, 1);
    toggleCardDetails(a);
    expect(a.querySelector<HTMLElement>(".card-details")!.hidden).toBe(false);
    expect(b.querySelector<HTMLElement>(".card-details")!.hidden).toBe(true);
  });

  it("directions link targets the API-provided URL", () => {
    const node = renderCard(card, 1, 0);
    expect(node.querySelector<HTMLAnchorElement>(".card-directions")!.getAttribute("href")).toBe(
      card.directions_url
    );
  });
});

describe("renderAnswer", () => {
  it("renders the stop heading from the plan", () => {
    const node = renderAnswer(answer);
    expect(node.querySelector(".stop-heading")!.textContent).toBe("Stop 1: Library");
  });

  it("shows the compiled query for transparency", () => {
    const node = renderAnswer(answer);
    expect(node.querySelector(".compiled-query code")!.textContent).toBe(
      answer.compiled_query
    );
  });
});
