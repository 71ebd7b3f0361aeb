// Payload shapes of the qcgt session API. The client never re-derives game
// rules from these; it renders them and posts moves back.

export type PlayerTag = "L" | "R";

export interface GameConfigView {
  flavor: string;
  width: number;
  budget_left?: number;
  budget_right?: number;
  dimension_cap?: number;
  demi?: boolean;
}

export type NimRealization = number[];

export interface GeographyRealization {
  edges: [string, string][];
  token: string;
  visited: string[];
}

export interface NodeKaylesRealization {
  occupied: string[];
  colors?: Record<string, string>;
}

export interface AvoidTrueRealization {
  free: string[];
}

export interface QbfRealization {
  assignment: Record<string, boolean>;
  phantom_used?: boolean;
  selected_clause?: number;
  literal_done?: boolean;
  ended?: boolean;
}

export type Realization =
  | NimRealization
  | GeographyRealization
  | NodeKaylesRealization
  | AvoidTrueRealization
  | QbfRealization;

export interface StateView {
  id: string;
  ruleset: string;
  to_move: PlayerTag;
  terminal: boolean;
  width: number;
  realizations: Realization[];
  realization_page: number;
  realization_pages: number;
  budgets: { left: number | null; right: number | null };
  config: GameConfigView;
  engine_role: PlayerTag | null;
  legal_classical_count: number;
  quantum_available: boolean;
  history_length: number;
  engine?: EngineReply;
}

export interface EngineReply {
  move: MovePayload;
  unsolved: boolean;
  strategy: "hero" | "search";
}

export type ClassicalMove = Record<string, unknown>;

export type MovePayload =
  | { classical: ClassicalMove }
  | { quantum: ClassicalMove[] };

export interface MovePage {
  kind: "classical" | "quantum";
  page: number;
  page_size: number;
  total: number | "truncated";
  moves: MovePayload[];
}

export interface AnalysisView {
  status: "solved" | "exceeded";
  outcome?: string;
  best?: MovePayload;
  nodes?: number;
  reason?: string;
}

export interface ApiErrorBody {
  error: { code: string; reason: string };
}
