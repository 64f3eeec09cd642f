import type { ClientLocation, QueryResponse } from "./types";

export type Message =
  | { role: "user"; text: string }
  | { role: "system"; response: QueryResponse; queryText: string }
  | { role: "error"; text: string; retryText: string };

/**
 * Single-tab chat state. Messages are append-only; the session id is fixed
 * for the lifetime of the tab; one query is in flight at a time.
 */
export class ChatViewState {
  readonly sessionId: string;
  readonly messages: Message[] = [];
  pending = false;
  locationConsent = false;
  clientLocation: ClientLocation | null = null;
  selectedCard: { stop: number; card: number } | null = null;

  constructor(sessionId?: string) {
    this.sessionId = sessionId ?? generateSessionId();
  }

  append(message: Message): void {
    this.messages.push(message);
  }

  grantLocation(location: ClientLocation): void {
    this.locationConsent = true;
    this.clientLocation = location;
  }

  denyLocation(): void {
    this.locationConsent = false;
    this.clientLocation = null;
  }

  /** Coordinates to send with a query: only after explicit consent. */
  locationForQuery(): ClientLocation | null {
    return this.locationConsent ? this.clientLocation : null;
  }

  lastAnswer(): QueryResponse | null {
    for (let i = this.messages.length - 1; i >= 0; i--) {
      const m = this.messages[i];
      if (m.role === "system" && m.response.kind === "answer") return m.response;
    }
    return null;
  }

  lastQueryText(): string | null {
    for (let i = this.messages.length - 1; i >= 0; i--) {
      const m = this.messages[i];
      if (m.role === "user") return m.text;
    }
    return null;
  }
}

export function generateSessionId(): string {
  const rand = Math.random().toString(36).slice(2, 10);
  return `web-${Date.now().toString(36)}-${rand}`;
}
