import type { ClientLocation } from "./types";

/** Browser geolocation, asked only after the user explicitly opts in. */
export function requestLocation(): Promise<ClientLocation> {
  return new Promise((resolve, reject) => {
    if (!("geolocation" in navigator)) {
      reject(new Error("Location is not available in this browser"));
      return;
    }
    navigator.geolocation.getCurrentPosition(
      (position) =>
        resolve({ lat: position.coords.latitude, lon: position.coords.longitude }),
      () => reject(new Error("Location permission was denied")),
      { timeout: 10_000 }
    );
  });
}
