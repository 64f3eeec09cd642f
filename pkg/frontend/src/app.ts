import { ApiClient } from "./api";
import { renderAnswer, renderFallback } from "./cards";
import { saveBlob } from "./download";
import { requestLocation } from "./location";
import { renderMap } from "./map";
import { ChatViewState } from "./state";
import type { QueryResponse } from "./types";

const DOMAIN_LINE =
  "Welcome! Ask a question about Food Banks, Mental Health Services, " +
  "Shelters, Public Libraries, and Social Security offices in Philadelphia.";

const EXAMPLE_QUERIES = [
  "Is there a library on West Lehigh Avenue with free Wi-Fi on Tuesdays?",
  "Can you help me find a mental health service nearby?",
  "Help me find some food, a library where I can print a document, and a place to stay.",
];

const NOTICE_LINES = [
  "Please enable location access to see results near you.",
  "Questions are used to improve the service. No personal information is collected.",
];

const PROMPT = "What are you looking for, where, and when?";

export class App {
  readonly state: ChatViewState;
  private readonly api: ApiClient;
  private readonly root: HTMLElement;
  private messagesNode!: HTMLElement;
  private mapNode!: HTMLElement;
  private inputNode!: HTMLInputElement;
  private sendNode!: HTMLButtonElement;
  private statusNode!: HTMLElement;

  constructor(root: HTMLElement, api: ApiClient = new ApiClient(), state?: ChatViewState) {
    this.root = root;
    this.api = api;
    this.state = state ?? new ChatViewState();
    this.buildShell();
  }

  private buildShell(): void {
    this.root.innerHTML = "";

    const welcome = document.createElement("section");
    welcome.className = "welcome";
    const heading = document.createElement("p");
    heading.className = "welcome-domains";
    heading.textContent = DOMAIN_LINE;
    welcome.appendChild(heading);

    const examples = document.createElement("div");
    examples.className = "example-chips";
    for (const example of EXAMPLE_QUERIES) {
      const chip = document.createElement("button");
      chip.type = "button";
      chip.className = "chip";
      chip.textContent = example;
      chip.addEventListener("click", () => {
        this.inputNode.value = example;
        this.inputNode.dispatchEvent(new Event("input"));
        this.inputNode.focus();
      });
      examples.appendChild(chip);
    }
    welcome.appendChild(examples);

    const notices = document.createElement("ul");
    notices.className = "notices";
    for (const line of NOTICE_LINES) {
      const item = document.createElement("li");
      item.textContent = line;
      notices.appendChild(item);
    }
    welcome.appendChild(notices);

    const locationRow = document.createElement("div");
    locationRow.className = "location-row";
    const share = document.createElement("button");
    share.type = "button";
    share.id = "share-location";
    share.textContent = "Share my location";
    share.addEventListener("click", () => void this.askLocation());
    this.statusNode = document.createElement("span");
    this.statusNode.id = "location-status";
    this.statusNode.textContent = "Location not shared";
    locationRow.appendChild(share);
    locationRow.appendChild(this.statusNode);
    welcome.appendChild(locationRow);

    this.messagesNode = document.createElement("div");
    this.messagesNode.className = "chat";
    this.messagesNode.id = "chat";

    this.mapNode = document.createElement("aside");
    this.mapNode.className = "map-holder";
    this.mapNode.hidden = true;

    const form = document.createElement("form");
    form.className = "composer";
    this.inputNode = document.createElement("input");
    this.inputNode.type = "text";
    this.inputNode.id = "query-input";
    this.inputNode.placeholder = PROMPT;
    this.inputNode.setAttribute("aria-label", PROMPT);
    this.sendNode = document.createElement("button");
    this.sendNode.type = "submit";
    this.sendNode.id = "send";
    this.sendNode.textContent = "Send";
    this.sendNode.disabled = true;
    this.inputNode.addEventListener("input", () => {
      this.sendNode.disabled = this.state.pending || !this.inputNode.value.trim();
    });
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitQuery(this.inputNode.value);
    });
    form.appendChild(this.inputNode);
    form.appendChild(this.sendNode);

    const download = document.createElement("button");
    download.type = "button";
    download.id = "download-log";
    download.textContent = "Download session log";
    download.addEventListener("click", () => void this.downloadLog());

    this.root.appendChild(welcome);
    this.root.appendChild(this.messagesNode);
    this.root.appendChild(this.mapNode);
    this.root.appendChild(form);
    this.root.appendChild(download);
  }

  async askLocation(): Promise<void> {
    try {
      const location = await requestLocation();
      this.state.grantLocation(location);
      this.statusNode.textContent = "Location shared";
    } catch (err) {
      this.state.denyLocation();
      this.statusNode.textContent =
        err instanceof Error ? err.message : "Location unavailable";
    }
  }

  /** POST the utterance; render the stop plan or fallback; re-enable input. */
  async submitQuery(text: string, overrideLocation?: { lat: number; lon: number }): Promise<void> {
    const trimmed = text.trim();
    if (!trimmed || this.state.pending) return;
    this.state.pending = true;
    this.setComposerEnabled(false);
    this.state.append({ role: "user", text: trimmed });
    this.renderUserBubble(trimmed);
    this.inputNode.value = "";

    try {
      const location = overrideLocation ?? this.state.locationForQuery();
      const response = await this.api.query(this.state.sessionId, trimmed, location);
      this.state.append({ role: "system", response, queryText: trimmed });
      this.renderSystemTurn(response);
    } catch (err) {
      const message = err instanceof Error ? err.message : String(err);
      this.state.append({ role: "error", text: message, retryText: trimmed });
      this.renderErrorTurn(message, trimmed);
    } finally {
      this.state.pending = false;
      this.setComposerEnabled(true);
    }
  }

  async downloadLog(): Promise<void> {
    try {
      const blob = await this.api.sessionLog(this.state.sessionId);
      saveBlob(blob, `session-${this.state.sessionId}.log`);
    } catch (err) {
      const message = err instanceof Error ? err.message : String(err);
      this.renderNotice(message);
    }
  }

  private setComposerEnabled(enabled: boolean): void {
    this.inputNode.disabled = !enabled;
    this.sendNode.disabled = !enabled || !this.inputNode.value.trim();
  }

  private renderUserBubble(text: string): void {
    const bubble = document.createElement("p");
    bubble.className = "user-bubble";
    bubble.textContent = text;
    this.messagesNode.appendChild(bubble);
  }

  private renderNotice(text: string): void {
    const notice = document.createElement("p");
    notice.className = "notice-bubble";
    notice.textContent = text;
    this.messagesNode.appendChild(notice);
  }

  private renderErrorTurn(message: string, retryText: string): void {
    const bubble = document.createElement("div");
    bubble.className = "error-bubble";
    const text = document.createElement("p");
    text.textContent = `Request failed: ${message}`;
    const retry = document.createElement("button");
    retry.type = "button";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void this.submitQuery(retryText));
    bubble.appendChild(text);
    bubble.appendChild(retry);
    this.messagesNode.appendChild(bubble);
  }

  private renderSystemTurn(response: QueryResponse): void {
    const turn = document.createElement("div");
    turn.className = "system-turn";
    if (response.kind === "answer") {
      turn.appendChild(renderAnswer(response));
    } else {
      turn.appendChild(renderFallback(response));
    }
    this.messagesNode.appendChild(turn);
    this.renderMapPanel(response);
  }

  private renderMapPanel(response: QueryResponse): void {
    this.mapNode.innerHTML = "";
    const markers = response.kind === "answer" ? response.map_markers : [];
    if (!markers.length) {
      this.mapNode.hidden = true;
      return;
    }
    const refs: Array<{ stop: number; card: number }> = [];
    for (const stop of response.stop_plan?.stops ?? []) {
      stop.cards.forEach((_card, i) => refs.push({ stop: stop.index, card: i }));
    }
    const panel = renderMap(markers, refs, {
      onMarkerClick: (stop, card) => this.focusCard(stop, card),
      onSetStart: (lat, lon) => {
        const lastText = this.state.lastQueryText();
        if (!lastText) return;
        this.renderNotice(
          `Searching again from an adjusted starting point (${lat.toFixed(4)}, ${lon.toFixed(4)}).`
        );
        void this.submitQuery(lastText, { lat, lon });
      },
    });
    this.mapNode.appendChild(panel);
    this.mapNode.hidden = false;
  }

  focusCard(stopIndex: number, cardIndex: number): void {
    this.state.selectedCard = { stop: stopIndex, card: cardIndex };
    const node = this.root.querySelector<HTMLElement>(`#card-${stopIndex}-${cardIndex}`);
    if (node) {
      if (typeof node.scrollIntoView === "function") {
        node.scrollIntoView({ behavior: "smooth", block: "center" });
      }
      node.classList.add("card-focused");
      setTimeout(() => node.classList.remove("card-focused"), 1200);
    }
  }
}
