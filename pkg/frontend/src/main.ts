// Entry point: mount the dashboard into #app once the document is ready.

import { bootstrap } from "./app.js";

function mount(): void {
  const root = document.getElementById("app");
  if (root === null) {
    throw new Error("missing #app mount point");
  }
  bootstrap(root);
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", mount);
} else {
  mount();
}
