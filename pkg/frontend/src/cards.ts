import type { Card, QueryResponse, Stop } from "./types";

// Card fields render exactly as delivered by the API; the UI formats
// layout, never facts.

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function field(label: string, value: string): HTMLElement {
  const row = el("div", "card-field");
  row.appendChild(el("span", "card-field-label", label));
  row.appendChild(el("span", "card-field-value", value));
  return row;
}

export function renderCard(card: Card, stopIndex: number, cardIndex: number): HTMLElement {
  const root = el("article", "service-card");
  root.dataset.stop = String(stopIndex);
  root.dataset.card = String(cardIndex);
  root.id = `card-${stopIndex}-${cardIndex}`;

  root.appendChild(el("h3", "card-title", card.org_name));
  if (card.distance_mi !== null) {
    root.appendChild(field("Distance:", `${card.distance_mi} miles away`));
  }
  root.appendChild(field("Phone:", card.phone));
  root.appendChild(field("Address:", card.address));
  root.appendChild(field("Time:", card.hours_line));
  root.appendChild(field("Services:", card.services.join(", ")));

  const details = el("div", "card-details");
  details.hidden = true;
  if (card.details.description) {
    details.appendChild(field("About:", card.details.description));
  }
  if (card.details.eligibility) {
    details.appendChild(field("Eligibility:", card.details.eligibility));
  }
  if (card.details.neighborhood) {
    details.appendChild(field("Neighborhood:", card.details.neighborhood));
  }
  if (card.details.all_services.length) {
    details.appendChild(field("All services:", card.details.all_services.join(", ")));
  }
  if (card.details.weekly_hours.length) {
    const hours = el("div", "card-weekly-hours");
    hours.appendChild(el("span", "card-field-label", "Hours by day:"));
    const list = el("ul");
    for (const line of card.details.weekly_hours) {
      list.appendChild(el("li", undefined, line));
    }
    hours.appendChild(list);
    details.appendChild(hours);
  }

  const toggle = el("button", "card-more", "+ More information");
  toggle.type = "button";
  toggle.setAttribute("aria-expanded", "false");
  toggle.addEventListener("click", () => toggleCardDetails(root));

  const directions = el("a", "card-directions", "+ Get directions");
  directions.setAttribute("href", card.directions_url);
  directions.setAttribute("target", "_blank");
  directions.setAttribute("rel", "noopener");

  root.appendChild(toggle);
  root.appendChild(directions);
  root.appendChild(details);
  return root;
}

/** Show/hide one card's details without touching any other card. */
export function toggleCardDetails(cardNode: HTMLElement): void {
  const details = cardNode.querySelector<HTMLElement>(".card-details");
  const toggle = cardNode.querySelector<HTMLButtonElement>(".card-more");
  if (!details || !toggle) return;
  details.hidden = !details.hidden;
  toggle.textContent = details.hidden ? "+ More information" : "- Less information";
  toggle.setAttribute("aria-expanded", String(!details.hidden));
}

function renderStop(stop: Stop): HTMLElement {
  const section = el("section", "stop");
  section.appendChild(el("h2", "stop-heading", `Stop ${stop.index}: ${stop.label}`));
  stop.cards.forEach((card, i) => section.appendChild(renderCard(card, stop.index, i)));
  return section;
}

export function renderAnswer(response: QueryResponse): HTMLElement {
  const root = el("div", "answer");
  const plan = response.stop_plan;
  if (plan) {
    for (const stop of plan.stops) root.appendChild(renderStop(stop));
    if (plan.message) root.appendChild(el("p", "no-results", plan.message));
  }
  if (response.compiled_query) {
    const wrap = el("details", "compiled-query");
    wrap.appendChild(el("summary", undefined, "How this was searched"));
    wrap.appendChild(el("code", undefined, response.compiled_query));
    root.appendChild(wrap);
  }
  return root;
}

export function renderFallback(response: QueryResponse): HTMLElement {
  const message = response.fallback?.user_message ?? "Something went wrong.";
  return el("p", "fallback-bubble", message);
}
