// Wire protocol types, mirroring PROTOCOL.md exactly. The server is the
// authority; the client renders only what a PlayerView carries.

export const LEGAL_CLIENT_TYPES = [
  "JoinLobby",
  "SubmitPhrase",
  "SubmitCard",
  "SubmitVote",
] as const;

export type ClientMessageType = (typeof LEGAL_CLIENT_TYPES)[number];

export type ServerMessageType =
  | "LobbyState"
  | "GameStart"
  | "StateUpdate"
  | "RoundResult"
  | "Explanation"
  | "GameEnd"
  | "Error";

export interface Envelope<T = unknown> {
  type: string;
  seq: number;
  payload: T;
}

export interface CardView {
  id: string;
  tags: string[];
  image_ref?: string;
}

export type GamePhase =
  | "await_storyteller"
  | "await_decoys"
  | "await_votes"
  | "round_scored"
  | "game_over";

export interface RoundResultPayload {
  round: number;
  storyteller: number;
  phrase: string[] | null;
  owners: Record<string, number>;
  votes: Record<string, string>;
  points: number[];
  n_v: number;
  scores_after: number[];
}

export interface PlayerView {
  seat: number;
  phase: GamePhase;
  round: number;
  storyteller: number;
  scores: number[];
  target_score: number;
  phrase_limit: number;
  deck_remaining: number;
  hand: CardView[];
  phrase: string[] | null;
  table: string[] | null;
  your_submission: string | null;
  your_vote: string | null;
  pending_decoys: number;
  pending_votes: number;
  winners: number[] | null;
  result: Omit<RoundResultPayload, "scores_after" | "round"> | null;
}

export interface LobbyStatePayload {
  you: number;
  seats_filled: number;
  n_players: number;
  started: boolean;
  token?: string;
}

export interface GameStartPayload {
  your_seat: number;
  n_players: number;
  phrase_limit: number;
  target_score: number;
}

export interface ExplanationPayload {
  seat: number;
  action: string;
  round: number;
  explanation: {
    strategy: string;
    objective: number;
    distribution: number[] | null;
    alternatives: { action: string; objective: number }[];
    notes: Record<string, unknown>;
  };
}

export interface GameEndPayload {
  scores: number[];
  winners: number[];
  rounds: number;
}

export interface ErrorPayload {
  code: string;
  message: string;
}
