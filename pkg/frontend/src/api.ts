import type { ClientLocation, QueryResponse } from "./types";

// The API base defaults to same-origin; override for a split dev setup,
// e.g. api.ts served from :8050 talking to the engine on :8040.
export class ApiClient {
  constructor(private baseUrl: string = "") {}

  async query(
    sessionId: string,
    text: string,
    clientLocation: ClientLocation | null
  ): Promise<QueryResponse> {
    const body: Record<string, unknown> = { session_id: sessionId, text };
    if (clientLocation) body.client_location = clientLocation;
    const resp = await fetch(`${this.baseUrl}/api/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) throw new Error(`query failed: HTTP ${resp.status}`);
    return (await resp.json()) as QueryResponse;
  }

  /** Raw log bytes, returned exactly as the server sent them. */
  async sessionLog(sessionId: string): Promise<Blob> {
    const resp = await fetch(`${this.baseUrl}/api/session/${encodeURIComponent(sessionId)}/log`);
    if (resp.status === 404) throw new Error("no log for this session yet");
    if (!resp.ok) throw new Error(`log download failed: HTTP ${resp.status}`);
    return await resp.blob();
  }
}
