import { ApiClient } from "./api";
import { App } from "./app";

const root = document.getElementById("app");
if (root) {
  const base = (window as unknown as { SERVICENAV_API?: string }).SERVICENAV_API ?? "";
  new App(root, new ApiClient(base));
}
