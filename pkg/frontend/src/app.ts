/** Wires the pure state/render modules to the DOM and the API. */

import { ApiError, MatchdexApi } from "./api.js";
import {
  applyIndex,
  beginMatchLoad,
  initialState,
  type NavState,
  nextGame,
  nextPoint,
  nextSet,
  prevPoint,
  selectPoint,
  selectRally,
  toggleTag,
  withMatches,
} from "./state.js";
import {
  renderControls,
  renderMatchList,
  renderPointView,
  renderTagFilters,
  renderTimeline,
  renderTree,
} from "./render.js";
import type { TagName } from "./types.js";

export class App {
  state: NavState = initialState;

  constructor(
    private root: HTMLElement,
    private api: MatchdexApi,
    /** Optional per-match video URL templates ({seconds}/{frame} expand). */
    private videoTemplates: Record<string, string> = {},
  ) {}

  async start(): Promise<void> {
    this.root.innerHTML = `
      <header><h1>matchdex navigator</h1></header>
      <div class="layout">
        <aside>
          <section id="matches" aria-label="matches"></section>
          <section id="tree" aria-label="set game point tree"></section>
        </aside>
        <main>
          <section id="filters" aria-label="tag filters"></section>
          <section id="timeline" aria-label="timeline"></section>
          <section id="controls" aria-label="navigation"></section>
          <section id="point" aria-label="selected point"></section>
          <p id="status" role="status"></p>
        </main>
      </div>`;
    this.root.addEventListener("click", (ev) => this.onClick(ev));
    document.addEventListener("keydown", (ev) => this.onKey(ev));
    try {
      const matches = await this.api.matches();
      this.update(withMatches(this.state, matches));
      if (matches.length === 1) {
        await this.loadMatch(matches[0]!.match_id);
      }
    } catch (err) {
      this.setStatus(describeError(err));
    }
  }

  async loadMatch(matchId: string): Promise<void> {
    const next = beginMatchLoad(this.state, matchId);
    this.update(next);
    const generation = next.generation;
    try {
      const index = await this.api.match(matchId);
      this.update(applyIndex(this.state, generation, index));
    } catch (err) {
      this.setStatus(describeError(err));
    }
  }

  update(state: NavState): void {
    this.state = state;
    this.render();
  }

  private onClick(ev: Event): void {
    const target = (ev.target as HTMLElement).closest<HTMLElement>(
      "[data-match],[data-point],[data-rally],[data-tag],[data-nav]",
    );
    if (!target) return;
    const { match, point, rally, tag, nav } = target.dataset;
    if (match) {
      void this.loadMatch(match);
    } else if (point) {
      const [s, g, p] = point.split(".").map(Number);
      this.update(
        selectPoint(this.state, { set_no: s!, game_no: g!, point_no: p! }),
      );
    } else if (rally) {
      this.update(selectRally(this.state, Number(rally)));
    } else if (tag) {
      this.update(toggleTag(this.state, tag as TagName));
    } else if (nav) {
      this.navigate(nav);
    }
  }

  private onKey(ev: KeyboardEvent): void {
    if (ev.target instanceof HTMLInputElement) return;
    const bindings: Record<string, string> = {
      ArrowRight: "next-point",
      ArrowLeft: "prev-point",
      g: "next-game",
      s: "next-set",
    };
    const nav = bindings[ev.key];
    if (nav) {
      ev.preventDefault();
      this.navigate(nav);
    }
  }

  private navigate(action: string): void {
    const ops: Record<string, (s: NavState) => NavState> = {
      "next-point": nextPoint,
      "prev-point": prevPoint,
      "next-game": nextGame,
      "next-set": nextSet,
    };
    const op = ops[action];
    if (op) this.update(op(this.state));
  }

  private setStatus(text: string): void {
    const el = this.root.querySelector("#status");
    if (el) el.textContent = text;
  }

  private render(): void {
    const set = (id: string, html: string) => {
      const el = this.root.querySelector(`#${id}`);
      if (el) el.innerHTML = html;
    };
    set("matches", renderMatchList(this.state.matches, this.state.matchId));
    set("tree", renderTree(this.state));
    set("filters", renderTagFilters(this.state));
    set("timeline", renderTimeline(this.state));
    set("controls", renderControls(this.state));
    const template = this.state.matchId
      ? this.videoTemplates[this.state.matchId]
      : undefined;
    set("point", renderPointView(this.state, template));
  }
}

export function describeError(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}
