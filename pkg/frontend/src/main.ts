// Browser bootstrap: reads the API base from window.ISSUEMAP_API (same
// origin by default), restores view state from the URL hash, and starts the
// app in #app.

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { fromHash } from "./state.js";

declare global {
  interface Window {
    ISSUEMAP_API?: string;
  }
}

function bootstrap(): void {
  const root = document.getElementById("app");
  if (!root) return;
  const api = new ApiClient(window.ISSUEMAP_API ?? "");
  const app = new App(root, api, fromHash(location.hash));

  const form = document.getElementById("issue-search") as HTMLFormElement | null;
  if (form) {
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const input = form.querySelector("input");
      if (input && input.value.trim()) {
        void app.navigate(input.value.trim().toUpperCase());
      }
    });
  }

  void app.start();
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  bootstrap();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", bootstrap);
}

export { bootstrap };
