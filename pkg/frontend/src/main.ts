import { MatchdexApi } from "./api.js";
import { App } from "./app.js";

declare global {
  interface Window {
    /** Optional per-match video URL templates, e.g.
     * { "m1": "https://cdn.example/m1.mp4#t={seconds}" } */
    MATCHDEX_VIDEO_TEMPLATES?: Record<string, string>;
  }
}

const root = document.getElementById("app");
if (root) {
  const app = new App(root, new MatchdexApi(""), window.MATCHDEX_VIDEO_TEMPLATES ?? {});
  void app.start();
}
