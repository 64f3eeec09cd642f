// Wire types mirroring the HTTP API. Every fact the UI displays originates
// from one of these fields; the client adds nothing of its own.

export interface CardDetails {
  description: string;
  eligibility: string;
  weekly_hours: string[];
  all_services: string[];
  neighborhood: string;
}

export interface Card {
  org_name: string;
  distance_mi: string | null;
  phone: string;
  address: string;
  hours_line: string;
  services: string[];
  lat: number;
  lon: number;
  directions_url: string;
  details: CardDetails;
}

export interface Stop {
  index: number;
  label: string;
  cards: Card[];
}

export interface StopPlan {
  stops: Stop[];
  message: string | null;
}

export interface Fallback {
  reason: string;
  user_message: string;
}

export interface MapMarker {
  label: string;
  lat: number;
  lon: number;
  distance_mi: string | null;
}

export interface QueryResponse {
  kind: "answer" | "fallback";
  stop_plan: StopPlan | null;
  fallback: Fallback | null;
  compiled_query: string | null;
  map_markers: MapMarker[];
  latency_ms: number;
}

export interface ClientLocation {
  lat: number;
  lon: number;
}
