/** HTML-string views. Pure functions of state, DOM-free and testable;
 * app.ts mounts them and wires events by delegation on data- attributes.
 */

import type { NavState } from "./state.js";
import { canNextPoint, canPrevPoint, recordsAt, visibleRallies } from "./state.js";
import { layoutTimeline } from "./timeline.js";
import { buildTree } from "./tree.js";
import type { MatchSummary, RallyRecordJson, TagName } from "./types.js";

export const TAGS: TagName[] = ["fault", "deuce", "advantage"];

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderMatchList(matches: MatchSummary[], selected: string | null): string {
  if (matches.length === 0) {
    return `<p class="empty">No indexes loaded.</p>`;
  }
  const items = matches
    .map((m) => {
      const cls = m.match_id === selected ? "match selected" : "match";
      return (
        `<li><button class="${cls}" data-match="${esc(m.match_id)}">` +
        `${esc(m.match_id)} <span class="muted">${m.rallies} rallies, ` +
        `best of ${m.format.best_of}</span></button></li>`
      );
    })
    .join("");
  return `<ul class="match-list">${items}</ul>`;
}

export function renderTree(state: NavState): string {
  if (!state.index) return `<p class="empty">Select a match.</p>`;
  const tree = buildTree(state.index.rallies);
  const sel = state.selection;
  const sets = tree
    .map((s) => {
      const games = s.games
        .map((g) => {
          const points = g.points
            .map((p) => {
              const isSel =
                sel !== null &&
                sel.set_no === p.coords.set_no &&
                sel.game_no === p.coords.game_no &&
                sel.point_no === p.coords.point_no;
              const cls = isSel ? "point selected" : "point";
              const fault = p.rallies.length > 1 ? " *" : "";
              return (
                `<li><button class="${cls}" data-point="${p.coords.set_no}.` +
                `${p.coords.game_no}.${p.coords.point_no}">P${p.coords.point_no}` +
                `${fault}</button></li>`
              );
            })
            .join("");
          return (
            `<details open><summary>Game ${g.game_no}</summary>` +
            `<ul class="points">${points}</ul></details>`
          );
        })
        .join("");
      return `<details open><summary>Set ${s.set_no}</summary>${games}</details>`;
    })
    .join("");
  return `<div class="tree">${sets}</div>`;
}

export function renderTimeline(state: NavState): string {
  if (!state.index) return "";
  const selectedIds = new Set(
    state.selection ? recordsAt(state, state.selection).map((r) => r.rally_id) : [],
  );
  const blocks = layoutTimeline(state.index.rallies, visibleRallies(state), selectedIds);
  const body = blocks
    .map((b) => {
      const classes = ["block", ...b.tags, ...(b.selected ? ["selected"] : [])];
      return (
        `<button class="${classes.join(" ")}" data-rally="${b.rally_id}" ` +
        `title="${esc(b.score)}" style="left:${(b.left * 100).toFixed(3)}%;` +
        `width:${(b.width * 100).toFixed(3)}%"></button>`
      );
    })
    .join("");
  return `<div class="timeline-axis">${body}</div>`;
}

export function renderTagFilters(state: NavState): string {
  return TAGS.map((t) => {
    const on = state.tagFilters.has(t);
    return (
      `<button class="tag-toggle${on ? " on" : ""}" data-tag="${t}" ` +
      `aria-pressed="${on}">${t}</button>`
    );
  }).join("");
}

/** Expand a per-match video-URL template: {seconds} and {frame}. */
export function videoLink(template: string, frame: number, fps: number): string {
  return template
    .replace("{seconds}", (frame / fps).toFixed(1))
    .replace("{frame}", String(frame));
}

export function renderPointView(state: NavState, videoTemplate?: string): string {
  if (!state.index || !state.selection) {
    return `<p class="empty">Pick a point from the tree or timeline.</p>`;
  }
  const records = recordsAt(state, state.selection);
  if (records.length === 0) return `<p class="empty">No rallies here.</p>`;
  const fps = state.index.fps;
  const rows = records
    .map((r: RallyRecordJson) => {
      const t0 = (r.start_frame / fps).toFixed(1);
      const t1 = (r.end_frame / fps).toFixed(1);
      const tags = r.tags.length
        ? r.tags.map((t) => `<span class="pill ${t}">${t}</span>`).join(" ")
        : "";
      const flagged = r.flagged ? `<span class="pill flagged">flagged</span>` : "";
      const video = videoTemplate
        ? `<td><a href="${esc(videoLink(videoTemplate, r.start_frame, fps))}" ` +
          `target="_blank" rel="noopener">watch</a></td>`
        : "";
      return (
        `<tr><td>#${r.rally_id}</td><td class="score">${esc(r.score)}</td>` +
        `<td>frames ${r.start_frame}-${r.end_frame}</td>` +
        `<td>${t0}s - ${t1}s</td><td>${tags} ${flagged}</td>${video}</tr>`
      );
    })
    .join("");
  const { set_no, game_no, point_no } = state.selection;
  return (
    `<h3>Set ${set_no} / Game ${game_no} / Point ${point_no}</h3>` +
    `<table class="records">${rows}</table>`
  );
}

export function renderControls(state: NavState): string {
  const dis = (ok: boolean) => (ok ? "" : " disabled");
  return (
    `<button data-nav="prev-point"${dis(canPrevPoint(state))}>&#8592; prev point</button>` +
    `<button data-nav="next-point"${dis(canNextPoint(state))}>next point &#8594;</button>` +
    `<button data-nav="next-game"${dis(state.index !== null)}>next game</button>` +
    `<button data-nav="next-set"${dis(state.index !== null)}>next set</button>`
  );
}
