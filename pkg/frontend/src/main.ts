import { Api } from "./api.js";
import { App } from "./app.js";

const root = document.getElementById("app");
if (!(root instanceof HTMLElement)) {
  throw new Error("missing #app root element");
}
App.boot({ root, api: new Api("") }).catch((err: unknown) => {
  root.textContent = `failed to load: ${
    err instanceof Error ? err.message : String(err)
  }`;
});
